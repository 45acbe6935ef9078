//! Dihedral and cyclic groups in coordinate form.
//!
//! Elements are canonical pairs `a^rotation * b^reflection` with the rotation
//! reduced mod n; cyclic groups use the same type with the reflection bit
//! forced to zero. Group automorphisms are the pairs `sigma(r, s)` with
//! `gcd(r, n) = 1`, acting by `a^i -> a^(r*i)` and `a^j b -> a^(r*j+s) b`.
//! For cyclic groups `s` is always zero.
//!
//! Dihedral specs require `n >= 3`: for n = 2 the three involutions of the
//! Klein four-group can be permuted arbitrarily, so the `sigma(r, s)` family
//! would not exhaust the automorphism group.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("dihedral groups need n >= 3 here, got n = {0}")]
    DihedralTooSmall(u64),
    #[error("cyclic groups need n >= 1")]
    CyclicTooSmall,
    #[error("cyclic groups have no reflections")]
    ReflectionInCyclic,
    #[error("r = {r} is not a unit mod {n}")]
    NotAUnit { r: u64, n: u64 },
    #[error("cannot parse group element from {0:?}")]
    BadElementSyntax(String),
    #[error("cannot parse group spec from {0:?}, expected dihedral:<n> or cyclic:<n>")]
    BadSpecSyntax(String),
    #[error("the identity cannot belong to a connection set")]
    IdentityInSet,
    #[error("connection sets must be nonempty")]
    EmptySet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Dihedral,
    Cyclic,
}

/// A dihedral group of order 2n (n >= 3) or a cyclic group of order n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    kind: GroupKind,
    n: u64,
}

impl GroupSpec {
    pub fn dihedral(n: u64) -> Result<GroupSpec, GroupError> {
        if n < 3 {
            return Err(GroupError::DihedralTooSmall(n));
        }
        Ok(GroupSpec {
            kind: GroupKind::Dihedral,
            n,
        })
    }

    pub fn cyclic(n: u64) -> Result<GroupSpec, GroupError> {
        if n < 1 {
            return Err(GroupError::CyclicTooSmall);
        }
        Ok(GroupSpec {
            kind: GroupKind::Cyclic,
            n,
        })
    }

    /// Parses `dihedral:<n>` or `cyclic:<n>`.
    pub fn parse(text: &str) -> Result<GroupSpec, GroupError> {
        let bad = || GroupError::BadSpecSyntax(text.to_string());
        let (kind, n) = text.trim().split_once(':').ok_or_else(bad)?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "dihedral" => GroupSpec::dihedral(n),
            "cyclic" => GroupSpec::cyclic(n),
            _ => Err(bad()),
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> usize {
        match self.kind {
            GroupKind::Dihedral => 2 * self.n as usize,
            GroupKind::Cyclic => self.n as usize,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            rotation: 0,
            reflection: false,
        }
    }

    /// Builds `a^rotation * b^reflection`, reducing the rotation mod n.
    pub fn element(&self, rotation: i64, reflection: bool) -> Result<GroupElement, GroupError> {
        if reflection && self.kind == GroupKind::Cyclic {
            return Err(GroupError::ReflectionInCyclic);
        }
        Ok(GroupElement {
            rotation: rotation.rem_euclid(self.n as i64) as u64,
            reflection,
        })
    }

    pub fn rotation(&self, exponent: i64) -> GroupElement {
        self.element(exponent, false).unwrap()
    }

    /// `a^exponent * b`; panics for cyclic specs.
    pub fn reflection(&self, exponent: i64) -> GroupElement {
        self.element(exponent, true).unwrap()
    }

    fn check(&self, g: GroupElement) {
        assert!(
            g.rotation < self.n,
            "element {g} is not reduced mod {}",
            self.n
        );
        assert!(
            !(g.reflection && self.kind == GroupKind::Cyclic),
            "reflection element {g} used with a cyclic spec"
        );
    }

    /// All elements in canonical order: rotations by exponent, then
    /// reflections by exponent.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut all: Vec<GroupElement> = (0..self.n)
            .map(|i| GroupElement {
                rotation: i,
                reflection: false,
            })
            .collect();
        if self.kind == GroupKind::Dihedral {
            all.extend((0..self.n).map(|i| GroupElement {
                rotation: i,
                reflection: true,
            }));
        }
        all
    }

    /// Position of an element in the canonical order.
    pub fn index_of(&self, g: GroupElement) -> usize {
        self.check(g);
        if g.reflection {
            self.n as usize + g.rotation as usize
        } else {
            g.rotation as usize
        }
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        assert!(index < self.order(), "element index {index} out of range");
        let n = self.n as usize;
        GroupElement {
            rotation: (index % n) as u64,
            reflection: index >= n,
        }
    }

    /// Group product `g * h`. The dihedral relation `b a = a^-1 b` gives
    /// `(a^i b^e)(a^j b^f) = a^(i+j) b^f` for e = 0 and `a^(i-j) b^(1-f)`
    /// for e = 1.
    pub fn multiply(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        self.check(g);
        self.check(h);
        let n = self.n;
        if g.reflection {
            GroupElement {
                rotation: (g.rotation + n - h.rotation) % n,
                reflection: !h.reflection,
            }
        } else {
            GroupElement {
                rotation: (g.rotation + h.rotation) % n,
                reflection: h.reflection,
            }
        }
    }

    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        self.check(g);
        if g.reflection {
            g
        } else {
            GroupElement {
                rotation: (self.n - g.rotation) % self.n,
                reflection: false,
            }
        }
    }

    /// Least `w >= 1` with `g^w = 1`.
    pub fn element_order(&self, g: GroupElement) -> u64 {
        self.check(g);
        if g.reflection {
            2
        } else if g.rotation == 0 {
            1
        } else {
            self.n / gcd(g.rotation, self.n)
        }
    }

    /// The full automorphism group, ordered by (r, s) ascending.
    pub fn automorphisms(&self) -> Vec<GroupAut> {
        let mut auts = Vec::new();
        for r in 0..self.n.max(1) {
            if gcd(r, self.n) != 1 {
                continue;
            }
            match self.kind {
                GroupKind::Dihedral => {
                    for s in 0..self.n {
                        auts.push(GroupAut { r, s });
                    }
                }
                GroupKind::Cyclic => auts.push(GroupAut { r, s: 0 }),
            }
        }
        auts
    }

    pub fn identity_aut(&self) -> GroupAut {
        GroupAut {
            r: 1 % self.n,
            s: 0,
        }
    }

    pub fn aut(&self, r: i64, s: i64) -> Result<GroupAut, GroupError> {
        let n = self.n as i64;
        let r = r.rem_euclid(n) as u64;
        let s = match self.kind {
            GroupKind::Dihedral => s.rem_euclid(n) as u64,
            GroupKind::Cyclic => 0,
        };
        if gcd(r, self.n) != 1 {
            return Err(GroupError::NotAUnit { r, n: self.n });
        }
        Ok(GroupAut { r, s })
    }

    /// Image of `g` under `sigma(r, s)`.
    pub fn apply_aut(&self, aut: GroupAut, g: GroupElement) -> GroupElement {
        self.check(g);
        let n = self.n as u128;
        let rotated =
            (aut.r as u128 * g.rotation as u128 + if g.reflection { aut.s as u128 } else { 0 }) % n;
        GroupElement {
            rotation: rotated as u64,
            reflection: g.reflection,
        }
    }

    /// Composition in application order: `compose_auts(f, g)` applies `f`
    /// first, then `g`, matching pointwise application.
    pub fn compose_auts(&self, first: GroupAut, second: GroupAut) -> GroupAut {
        let n = self.n as u128;
        let r = (first.r as u128 * second.r as u128) % n;
        let s = (second.r as u128 * first.s as u128 + second.s as u128) % n;
        GroupAut {
            r: r as u64,
            s: s as u64,
        }
    }

    /// Least `w >= 1` with `sigma^w` the identity: the first `w` for which
    /// `r^w = 1 (mod n)` and `s * (r^(w-1) + ... + r + 1) = 0 (mod n)` hold
    /// together.
    pub fn aut_order(&self, aut: GroupAut) -> u64 {
        let n = self.n as u128;
        let r = aut.r as u128;
        let s = aut.s as u128;
        let mut power = 1u128 % n;
        let mut geometric_sum = 0u128;
        for w in 1..=(self.n * self.n).max(2) {
            geometric_sum = (geometric_sum + power) % n;
            power = power * r % n;
            if power == 1 % n && (s * geometric_sum).is_multiple_of(n) {
                return w;
            }
        }
        unreachable!("automorphism order exceeds n^2");
    }

    pub fn aut_inverse(&self, aut: GroupAut) -> GroupAut {
        let mut inverse = self.identity_aut();
        let mut power = self.identity_aut();
        loop {
            let next = self.compose_auts(power, aut);
            if next == self.identity_aut() {
                return inverse;
            }
            inverse = next;
            power = next;
        }
    }
}

/// `a^rotation * b^reflection`, reduced mod n.
///
/// The ordering sorts all rotations before all reflections, each by
/// exponent, matching the canonical vertex order of Cayley digraphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    rotation: u64,
    reflection: bool,
}

impl GroupElement {
    pub fn rotation_exponent(&self) -> u64 {
        self.rotation
    }

    pub fn is_reflection(&self) -> bool {
        self.reflection
    }

    pub fn is_identity(&self) -> bool {
        self.rotation == 0 && !self.reflection
    }

    /// Parses `1`, `a`, `b`, `a^i`, `a*b`, or `a^i*b`, with `i` a possibly
    /// negative integer taken mod n. Whitespace is ignored.
    pub fn parse(spec: &GroupSpec, text: &str) -> Result<GroupElement, GroupError> {
        let bad = || GroupError::BadElementSyntax(text.to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "1" {
            return Ok(spec.identity());
        }
        let (rotation_part, reflection) = if compact == "b" {
            (None, true)
        } else if let Some(rest) = compact.strip_suffix("*b") {
            (Some(rest), true)
        } else {
            (Some(compact.as_str()), false)
        };
        if reflection && spec.kind() == GroupKind::Cyclic {
            return Err(GroupError::ReflectionInCyclic);
        }
        let exponent = match rotation_part {
            None => 0,
            Some("a") => 1,
            Some(rest) => {
                let digits = rest.strip_prefix("a^").ok_or_else(bad)?;
                digits.parse::<i64>().map_err(|_| bad())?
            }
        };
        spec.element(exponent, reflection)
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &GroupElement) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &GroupElement) -> std::cmp::Ordering {
        (self.reflection, self.rotation).cmp(&(other.reflection, other.rotation))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rotation, self.reflection) {
            (0, false) => write!(f, "1"),
            (0, true) => write!(f, "b"),
            (1, false) => write!(f, "a"),
            (1, true) => write!(f, "a*b"),
            (i, false) => write!(f, "a^{i}"),
            (i, true) => write!(f, "a^{i}*b"),
        }
    }
}

/// The automorphism `sigma(r, s)`. Cyclic groups always carry `s = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupAut {
    r: u64,
    s: u64,
}

impl GroupAut {
    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }
}

impl fmt::Display for GroupAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma({},{})", self.r, self.s)
    }
}

/// A nonempty set of non-identity elements, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectionSet {
    elements: BTreeSet<GroupElement>,
}

impl ConnectionSet {
    pub fn new(
        spec: &GroupSpec,
        elements: impl IntoIterator<Item = GroupElement>,
    ) -> Result<ConnectionSet, GroupError> {
        let mut set = BTreeSet::new();
        for g in elements {
            spec.check(g);
            if g.is_identity() {
                return Err(GroupError::IdentityInSet);
            }
            set.insert(g);
        }
        if set.is_empty() {
            return Err(GroupError::EmptySet);
        }
        Ok(ConnectionSet { elements: set })
    }

    /// Parses a comma-separated element list.
    pub fn parse(spec: &GroupSpec, text: &str) -> Result<ConnectionSet, GroupError> {
        let mut elements = Vec::new();
        for part in text.split(',') {
            elements.push(GroupElement::parse(spec, part)?);
        }
        ConnectionSet::new(spec, elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.elements.contains(&g)
    }

    pub fn iter(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.elements.iter().copied()
    }

    /// True iff `S = S^-1`, so `Cay(G, S)` is a graph rather than a proper
    /// digraph.
    pub fn is_inverse_closed(&self, spec: &GroupSpec) -> bool {
        self.elements
            .iter()
            .all(|&g| self.contains(spec.inverse(g)))
    }

    pub fn apply_aut(&self, spec: &GroupSpec, aut: GroupAut) -> ConnectionSet {
        ConnectionSet {
            elements: self
                .elements
                .iter()
                .map(|&g| spec.apply_aut(aut, g))
                .collect(),
        }
    }

    /// The lexicographically least set in the Aut(G)-orbit of this set,
    /// given the precomputed automorphism list.
    pub fn normalized_under(&self, spec: &GroupSpec, auts: &[GroupAut]) -> ConnectionSet {
        let mut best = self.clone();
        for &aut in auts {
            let image = self.apply_aut(spec, aut);
            if image < best {
                best = image;
            }
        }
        best
    }

    pub fn normalized(&self, spec: &GroupSpec) -> ConnectionSet {
        self.normalized_under(spec, &spec.automorphisms())
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// The first automorphism (in (r, s) order) mapping `S` onto `T`, if any.
pub fn sets_equivalent(spec: &GroupSpec, s: &ConnectionSet, t: &ConnectionSet) -> Option<GroupAut> {
    spec.automorphisms()
        .into_iter()
        .find(|&aut| s.apply_aut(spec, aut) == *t)
}

/// The subgroup generated by a connection set, as a sorted element list.
pub fn generated_subgroup(spec: &GroupSpec, s: &ConnectionSet) -> Vec<GroupElement> {
    let mut members = BTreeSet::from([spec.identity()]);
    let mut frontier = vec![spec.identity()];
    while let Some(g) = frontier.pop() {
        for h in s.iter() {
            let next = spec.multiply(g, h);
            if members.insert(next) {
                frontier.push(next);
            }
        }
    }
    members.into_iter().collect()
}

/// The setwise stabilizer Aut(G, S), in (r, s) order.
pub fn set_stabilizer_auts(spec: &GroupSpec, s: &ConnectionSet) -> Vec<GroupAut> {
    spec.automorphisms()
        .into_iter()
        .filter(|&aut| s.apply_aut(spec, aut) == *s)
        .collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
