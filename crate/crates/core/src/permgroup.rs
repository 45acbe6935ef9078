//! Permutation groups on a fixed point set.
//!
//! A [`PermGroup`] is built from generators. Groups whose order fits under a
//! caller-supplied cap keep a sorted list of all elements, which the
//! enumeration-style services here (stabilizers, kernels, conjugacy scans,
//! regular-subgroup listing) require. Larger groups fall back to a
//! Schreier-Sims stabilizer chain: order and membership stay exact, while
//! enumeration operations refuse with [`PermGroupError::NotMaterialized`].

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::perm::Perm;
use crate::schreier::StabChain;

/// Default ceiling on how many elements a group will materialize.
pub const DEFAULT_MATERIALIZATION_CAP: usize = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermGroupError {
    #[error("generator degree {found} differs from group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("permutation groups need a positive degree")]
    ZeroDegree,
    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("operation needs materialized elements, but the group order exceeds the cap")]
    NotMaterialized,
    #[error("claimed subgroup is not contained in the ambient group")]
    NotASubgroup,
    #[error("regular dihedral subgroups need an even degree of at least 4, got {0}")]
    BadDihedralDegree(usize),
    #[error("expected a group of degree {expected} or {doubled}, got {found}")]
    BadCyclicDegree {
        expected: usize,
        doubled: usize,
        found: usize,
    },
    #[error("partition blocks must be disjoint, nonempty, and cover all {degree} points")]
    MalformedPartition { degree: usize },
    #[error("partition block {block} is not mapped onto a block by some generator")]
    PartitionNotInvariant { block: usize },
}

/// A partition of `{0, ..., degree-1}` into nonempty blocks.
///
/// Block order is the caller's; points within a block are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    degree: usize,
    blocks: Vec<Vec<usize>>,
    block_index: Vec<usize>,
}

impl Partition {
    pub fn new(degree: usize, blocks: Vec<Vec<usize>>) -> Result<Partition, PermGroupError> {
        let malformed = PermGroupError::MalformedPartition { degree };
        let mut block_index = vec![usize::MAX; degree];
        let mut covered = 0usize;
        let mut sorted_blocks = blocks;
        for (b, block) in sorted_blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(malformed);
            }
            block.sort_unstable();
            for &point in block.iter() {
                if point >= degree || block_index[point] != usize::MAX {
                    return Err(malformed);
                }
                block_index[point] = b;
                covered += 1;
            }
        }
        if covered != degree {
            return Err(malformed);
        }
        Ok(Partition {
            degree,
            blocks: sorted_blocks,
            block_index,
        })
    }

    pub fn singletons(degree: usize) -> Partition {
        Partition::new(degree, (0..degree).map(|p| vec![p]).collect()).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.block_index[point]
    }
}

/// A permutation group of fixed degree, generated by `generators`.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    /// All elements, sorted, when the order fits under the construction cap.
    elements: Option<Vec<Perm>>,
    /// Exact order; `None` when it exceeds `u128`.
    order: Option<u128>,
    chain: Option<StabChain>,
}

impl PermGroup {
    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::from_generators(degree, Vec::new(), 1).unwrap()
    }

    /// Generates the group, materializing all elements when the order is at
    /// most `cap`. The order is exact either way.
    pub fn from_generators(
        degree: usize,
        generators: Vec<Perm>,
        cap: usize,
    ) -> Result<PermGroup, PermGroupError> {
        if degree == 0 {
            return Err(PermGroupError::ZeroDegree);
        }
        for gen in &generators {
            if gen.degree() != degree {
                return Err(PermGroupError::DegreeMismatch {
                    expected: degree,
                    found: gen.degree(),
                });
            }
        }
        let chain = StabChain::new(degree, &generators);
        let order = chain.order();
        let materialize = matches!(order, Some(o) if o <= cap as u128);
        let (elements, chain) = if materialize {
            let expected = order.unwrap() as usize;
            let mut seen = HashSet::with_capacity(expected.saturating_mul(2));
            let identity = Perm::identity(degree);
            seen.insert(identity.clone());
            let mut frontier = vec![identity];
            while let Some(g) = frontier.pop() {
                for gen in &generators {
                    let next = g.then(gen);
                    if !seen.contains(&next) {
                        frontier.push(next.clone());
                        seen.insert(next);
                    }
                }
            }
            debug_assert_eq!(seen.len(), expected);
            let mut elements: Vec<Perm> = seen.into_iter().collect();
            elements.sort_unstable();
            (Some(elements), None)
        } else {
            (None, Some(chain))
        };
        Ok(PermGroup {
            degree,
            generators,
            elements,
            order,
            chain,
        })
    }

    /// Wraps an element list already closed under composition. `generators`
    /// must generate exactly that set.
    pub(crate) fn from_parts(
        degree: usize,
        generators: Vec<Perm>,
        mut elements: Vec<Perm>,
    ) -> PermGroup {
        elements.sort_unstable();
        elements.dedup();
        debug_assert!(elements.binary_search(&Perm::identity(degree)).is_ok());
        let order = Some(elements.len() as u128);
        PermGroup {
            degree,
            generators,
            elements: Some(elements),
            order,
            chain: None,
        }
    }

    /// Wraps a closed element list, taking every non-identity element as a
    /// generator.
    pub(crate) fn from_closed_elements(degree: usize, elements: Vec<Perm>) -> PermGroup {
        let generators: Vec<Perm> = elements
            .iter()
            .filter(|e| !e.is_identity())
            .cloned()
            .collect();
        PermGroup::from_parts(degree, generators, elements)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Exact group order, or `None` if it does not fit in `u128`.
    pub fn order(&self) -> Option<u128> {
        self.order
    }

    pub fn is_materialized(&self) -> bool {
        self.elements.is_some()
    }

    /// All elements in sorted order.
    pub fn elements(&self) -> Result<&[Perm], PermGroupError> {
        self.elements
            .as_deref()
            .ok_or(PermGroupError::NotMaterialized)
    }

    pub fn contains(&self, perm: &Perm) -> bool {
        if perm.degree() != self.degree {
            return false;
        }
        match &self.elements {
            Some(elements) => elements.binary_search(perm).is_ok(),
            None => self.chain.as_ref().unwrap().contains(perm),
        }
    }

    /// True when both groups consist of exactly the same permutations.
    pub fn same_elements(&self, other: &PermGroup) -> Result<bool, PermGroupError> {
        Ok(self.elements()? == other.elements()?)
    }

    /// The orbit of `point`, ascending.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, PermGroupError> {
        if point >= self.degree {
            return Err(PermGroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut queue = VecDeque::from([point]);
        while let Some(p) = queue.pop_front() {
            for gen in &self.generators {
                let q = gen.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        Ok((0..self.degree).filter(|&p| seen[p]).collect())
    }

    /// All orbits, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.degree];
        let mut orbits = Vec::new();
        for point in 0..self.degree {
            if assigned[point] {
                continue;
            }
            let orbit = self.orbit(point).unwrap();
            for &p in &orbit {
                assigned[p] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0)
            .map(|o| o.len() == self.degree)
            .unwrap_or(false)
    }

    /// Transitive with order equal to the degree: every point pair is joined
    /// by exactly one element.
    pub fn is_regular(&self) -> bool {
        self.is_transitive() && self.order == Some(self.degree as u128)
    }

    /// The subgroup fixing `point`. Needs materialized elements.
    pub fn stabilizer(&self, point: usize) -> Result<PermGroup, PermGroupError> {
        if point >= self.degree {
            return Err(PermGroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let fixed: Vec<Perm> = self
            .elements()?
            .iter()
            .filter(|e| e.apply(point) == point)
            .cloned()
            .collect();
        Ok(PermGroup::from_closed_elements(self.degree, fixed))
    }

    fn check_subgroup(&self, h: &PermGroup) -> Result<(), PermGroupError> {
        if h.degree != self.degree {
            return Err(PermGroupError::DegreeMismatch {
                expected: self.degree,
                found: h.degree,
            });
        }
        if h.generators.iter().all(|g| self.contains(g)) {
            Ok(())
        } else {
            Err(PermGroupError::NotASubgroup)
        }
    }

    /// Searches the ambient elements in sorted order for a `g` with
    /// `h1^g = h2`, returning the first witness.
    pub fn are_conjugate_subgroups(
        &self,
        h1: &PermGroup,
        h2: &PermGroup,
    ) -> Result<Option<Perm>, PermGroupError> {
        self.check_subgroup(h1)?;
        self.check_subgroup(h2)?;
        let h2_elements = h2.elements()?;
        if h1.order() != h2.order() {
            return Ok(None);
        }
        for g in self.elements()? {
            let maps_into = h1
                .generators
                .iter()
                .all(|k| h2_elements.binary_search(&k.conjugated_by(g)).is_ok());
            // Generator images inside h2 pin down h1^g <= h2; equal orders
            // make that an equality.
            if maps_into {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    /// True iff conjugation by every ambient generator maps `h` onto itself.
    pub fn is_normal(&self, h: &PermGroup) -> Result<bool, PermGroupError> {
        self.check_subgroup(h)?;
        for g in &self.generators {
            for k in &h.generators {
                if !h.contains(&k.conjugated_by(g)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All regular subgroups of dihedral shape: `<x, y>` with `x` of order
    /// `two_n/2` and fixed-point-free, `y` an involution inverting `x`,
    /// together acting regularly. Deduplicated by element set.
    pub fn regular_dihedral_subgroups(
        &self,
        two_n: usize,
    ) -> Result<Vec<PermGroup>, PermGroupError> {
        if two_n < 4 || !two_n.is_multiple_of(2) {
            return Err(PermGroupError::BadDihedralDegree(two_n));
        }
        if self.degree != two_n {
            return Err(PermGroupError::DegreeMismatch {
                expected: two_n,
                found: self.degree,
            });
        }
        let n = two_n / 2;
        let elements = self.elements()?;
        let mut found = Vec::new();
        let mut seen_keys = HashSet::new();
        for x in elements {
            if !has_two_cycles_of(x, n) {
                continue;
            }
            let cycles = x.cycles();
            let (first, second) = (&cycles[0], &cycles[1]);
            // A regular <x, y> forces y to swap the two <x>-orbits, and y is
            // then determined by the image of one point: y(x^i p) = x^-i q.
            let p = first[0];
            for q_index in 0..n {
                let q = second[q_index];
                let mut images = vec![0usize; two_n];
                for i in 0..n {
                    let from = first[i];
                    let to = second[(q_index + n - i) % n];
                    images[from] = to;
                    images[to] = from;
                }
                let y = Perm::from_images(&images).unwrap();
                if !self.contains(&y) {
                    continue;
                }
                debug_assert_eq!(y.then(&y), Perm::identity(two_n));
                debug_assert_eq!(y.then(x).then(&y), x.inverse());
                debug_assert_eq!(y.apply(p), q);
                let mut subgroup_elements = dihedral_span(x, &y);
                subgroup_elements.sort_unstable();
                let key = element_key(&subgroup_elements);
                if seen_keys.insert(key) {
                    found.push(PermGroup::from_parts(
                        two_n,
                        vec![x.clone(), y],
                        subgroup_elements,
                    ));
                }
            }
        }
        Ok(found)
    }

    /// All regular cyclic subgroups of order `n`: the groups `<x>` for `x`
    /// an `n`-cycle when the degree is `n`, or the order-`n` cyclic halves of
    /// regular dihedral subgroups when the degree is `2n`.
    pub fn regular_cyclic_subgroups(&self, n: usize) -> Result<Vec<PermGroup>, PermGroupError> {
        if self.degree == n {
            let elements = self.elements()?;
            let mut found = Vec::new();
            let mut seen_keys = HashSet::new();
            for x in elements {
                if !has_single_cycle_of(x, n) {
                    continue;
                }
                let mut span = cyclic_span(x);
                span.sort_unstable();
                let key = element_key(&span);
                if seen_keys.insert(key) {
                    found.push(PermGroup::from_parts(n, vec![x.clone()], span));
                }
            }
            Ok(found)
        } else if self.degree == 2 * n {
            let mut found = Vec::new();
            let mut seen_keys = HashSet::new();
            for dihedral in self.regular_dihedral_subgroups(2 * n)? {
                let x = &dihedral.generators()[0];
                let mut span = cyclic_span(x);
                span.sort_unstable();
                let key = element_key(&span);
                if seen_keys.insert(key) {
                    found.push(PermGroup::from_parts(self.degree, vec![x.clone()], span));
                }
            }
            Ok(found)
        } else {
            Err(PermGroupError::BadCyclicDegree {
                expected: n,
                doubled: 2 * n,
                found: self.degree,
            })
        }
    }

    fn check_partition(&self, partition: &Partition) -> Result<(), PermGroupError> {
        if partition.degree() != self.degree {
            return Err(PermGroupError::DegreeMismatch {
                expected: self.degree,
                found: partition.degree(),
            });
        }
        for gen in &self.generators {
            for (b, block) in partition.blocks().iter().enumerate() {
                let target = partition.block_of(gen.apply(block[0]));
                if block
                    .iter()
                    .any(|&p| partition.block_of(gen.apply(p)) != target)
                    || partition.blocks()[target].len() != block.len()
                {
                    return Err(PermGroupError::PartitionNotInvariant { block: b });
                }
            }
        }
        Ok(())
    }

    /// The subgroup fixing every block of an invariant partition setwise.
    pub fn kernel_on_partition(&self, partition: &Partition) -> Result<PermGroup, PermGroupError> {
        self.check_partition(partition)?;
        let kernel: Vec<Perm> = self
            .elements()?
            .iter()
            .filter(|e| {
                (0..self.degree).all(|p| partition.block_of(e.apply(p)) == partition.block_of(p))
            })
            .cloned()
            .collect();
        Ok(PermGroup::from_closed_elements(self.degree, kernel))
    }

    /// The action induced on the blocks of an invariant partition, as a
    /// group of degree `partition.num_blocks()`.
    pub fn induced_block_action(&self, partition: &Partition) -> Result<PermGroup, PermGroupError> {
        self.check_partition(partition)?;
        let block_gens: Vec<Perm> = self
            .generators
            .iter()
            .map(|gen| {
                let images: Vec<usize> = partition
                    .blocks()
                    .iter()
                    .map(|block| partition.block_of(gen.apply(block[0])))
                    .collect();
                Perm::from_images(&images).unwrap()
            })
            .collect();
        PermGroup::from_generators(
            partition.num_blocks(),
            block_gens,
            DEFAULT_MATERIALIZATION_CAP,
        )
    }

    /// BFS over all conjugates of `subgroup` under the ambient generators,
    /// recording one conjugating witness per conjugate.
    pub fn subgroup_conjugacy_class(
        &self,
        subgroup: &PermGroup,
    ) -> Result<ConjugacyClass, PermGroupError> {
        self.check_subgroup(subgroup)?;
        let start = subgroup.elements()?.to_vec();
        let identity = Perm::identity(self.degree);
        let mut witnesses = HashMap::new();
        witnesses.insert(element_key(&start), identity);
        let mut queue = VecDeque::from([start]);
        while let Some(members) = queue.pop_front() {
            let witness = witnesses[&element_key(&members)].clone();
            for gen in &self.generators {
                let mut conjugated: Vec<Perm> =
                    members.iter().map(|m| m.conjugated_by(gen)).collect();
                conjugated.sort_unstable();
                let key = element_key(&conjugated);
                if let std::collections::hash_map::Entry::Vacant(e) = witnesses.entry(key) {
                    e.insert(witness.then(gen));
                    queue.push_back(conjugated);
                }
            }
        }
        Ok(ConjugacyClass { witnesses })
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order)
            .field("generators", &self.generators.len())
            .field("materialized", &self.elements.is_some())
            .finish()
    }
}

/// The set of conjugates of one subgroup under an ambient group, keyed by
/// flattened sorted element tables.
pub struct ConjugacyClass {
    witnesses: HashMap<Box<[u16]>, Perm>,
}

impl ConjugacyClass {
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// Whether `subgroup` (materialized) is one of the conjugates.
    pub fn contains(&self, subgroup: &PermGroup) -> Result<bool, PermGroupError> {
        Ok(self
            .witnesses
            .contains_key(&element_key(subgroup.elements()?)))
    }

    /// A witness `g` with `base^g = subgroup`, where `base` seeded the class.
    pub fn witness_for(&self, subgroup: &PermGroup) -> Result<Option<Perm>, PermGroupError> {
        Ok(self
            .witnesses
            .get(&element_key(subgroup.elements()?))
            .cloned())
    }
}

/// Flattens a sorted element list into a hashable key.
fn element_key(sorted_elements: &[Perm]) -> Box<[u16]> {
    let mut key = Vec::with_capacity(sorted_elements.len() * sorted_elements[0].degree());
    for e in sorted_elements {
        key.extend_from_slice(e.images());
    }
    key.into_boxed_slice()
}

/// True iff `perm` consists of exactly two cycles of length `n` (so it is
/// fixed-point-free of order `n` on `2n` points).
fn has_two_cycles_of(perm: &Perm, n: usize) -> bool {
    let mut remaining = perm.degree();
    let mut seen = vec![false; perm.degree()];
    let mut cycles = 0;
    for start in 0..perm.degree() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut p = start;
        loop {
            seen[p] = true;
            len += 1;
            p = perm.apply(p);
            if p == start {
                break;
            }
        }
        if len != n {
            return false;
        }
        cycles += 1;
        remaining -= len;
    }
    cycles == 2 && remaining == 0
}

fn has_single_cycle_of(perm: &Perm, n: usize) -> bool {
    if perm.degree() != n || n == 0 {
        return false;
    }
    let mut p = perm.apply(0);
    let mut len = 1;
    while p != 0 {
        p = perm.apply(p);
        len += 1;
        if len > n {
            return false;
        }
    }
    len == n
}

/// Elements of `<x, y>` for dihedral-shaped generator pairs: all `x^i` and
/// all `x^i y`.
fn dihedral_span(x: &Perm, y: &Perm) -> Vec<Perm> {
    let mut elements = cyclic_span(x);
    let rotations = elements.clone();
    for rotation in rotations {
        elements.push(rotation.then(y));
    }
    elements
}

fn cyclic_span(x: &Perm) -> Vec<Perm> {
    let mut elements = vec![Perm::identity(x.degree())];
    let mut power = x.clone();
    while !power.is_identity() {
        elements.push(power.clone());
        power = power.then(x);
    }
    elements
}
