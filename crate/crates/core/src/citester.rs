//! CI-subset decision procedures and valency sweeps.
//!
//! A connection set `S` is a CI-subset when every `T` whose Cayley digraph
//! is isomorphic to `Cay(G, S)` is the image of `S` under some group
//! automorphism. Two independent deciders are provided:
//!
//! * [`is_ci_definitional`] enumerates every candidate set of the same size,
//!   buckets them by canonical certificate, and compares the bucket holding
//!   `S` with the automorphism orbit of `S`;
//! * [`is_ci_babai`] materializes the full digraph automorphism group and
//!   checks that every regular subgroup of the right shape is conjugate to
//!   the right-translation subgroup.
//!
//! The two always agree; the sweep drivers report one verdict per orbit of
//! connection sets and list non-CI orbits as counterexamples.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::autengine::{analyze, Certificate};
use crate::digraph::{cayley, DigraphError};
use crate::group::{
    generated_subgroup, set_stabilizer_auts, ConnectionSet, GroupAut, GroupElement, GroupKind,
    GroupSpec,
};
use crate::perm::Perm;
use crate::permgroup::{PermGroup, PermGroupError, DEFAULT_MATERIALIZATION_CAP};

/// Largest candidate-set count the definitional route will enumerate.
pub const DEFAULT_MAX_SUBSETS: u128 = 200_000;

#[derive(Debug, Error)]
pub enum CiError {
    #[error("enumerating {candidates} candidate sets exceeds the budget of {max}")]
    SubsetBudgetExceeded { candidates: u128, max: u128 },
    #[error("the automorphism group has {order} elements, over the materialization cap {cap}")]
    AutTooLarge { order: u128, cap: usize },
    #[error("the automorphism group order does not fit in 128 bits")]
    AutOrderOverflow,
    #[error("this check applies to dihedral groups with odd n, got {got}")]
    NeedsOddDihedral { got: String },
    #[error("a sweep needs valency at least 1")]
    ZeroValency,
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error(transparent)]
    PermGroup(#[from] PermGroupError),
}

/// Resource limits for the deciders.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Cap on `binomial(|G| - 1, m)` for candidate enumeration.
    pub max_subsets: u128,
    /// Cap on automorphism groups materialized for subgroup enumeration.
    pub materialization_cap: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_subsets: DEFAULT_MAX_SUBSETS,
            materialization_cap: DEFAULT_MATERIALIZATION_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ci,
    NotCi,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Ci => "CI",
            Verdict::NotCi => "not-CI",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Definitional,
    Babai,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Definitional => "definitional",
            Method::Babai => "babai",
            Method::Both => "both",
        })
    }
}

/// Whether a sweep ranges over all connection sets or only inverse-closed
/// ones (whose Cayley digraphs are graphs).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Digraph,
    Graph,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Digraph => "digraph",
            Mode::Graph => "graph",
        })
    }
}

/// The outcome of deciding one connection set. A not-CI verdict always
/// carries a witness set, a rival subgroup, or both, depending on the
/// method that produced it.
#[derive(Debug, Clone)]
pub struct CiReport {
    pub group: GroupSpec,
    pub set: ConnectionSet,
    pub verdict: Verdict,
    pub method: Method,
    /// A set giving an isomorphic digraph without being an automorphic
    /// image of `set`; present iff the definitional route found one.
    pub witness: Option<ConnectionSet>,
    /// A regular subgroup of the right shape not conjugate to the
    /// right-translation subgroup; present iff the Babai route found one.
    pub rival_subgroup: Option<PermGroup>,
    /// Conjugating witnesses found for regular subgroups that are conjugate
    /// to the right translations, capped at a handful.
    pub conjugator_examples: Vec<Perm>,
    pub aut_order: u128,
    pub is_normal_cayley: bool,
}

/// One non-CI orbit found by a sweep; `orbit_size` counts how many of the
/// swept sets it covers.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub set: ConnectionSet,
    pub orbit_size: u128,
}

/// Results of testing every connection set of one size on one group.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub group: GroupSpec,
    pub valency: usize,
    pub mode: Mode,
    pub connected_only: bool,
    /// Sets enumerated after mode and connectivity filtering.
    pub total_sets: u128,
    /// Sets (not orbits) that are CI-subsets.
    pub ci_count: u128,
    /// Non-CI orbits, each reported once via its normalized representative.
    pub counterexamples: Vec<Counterexample>,
}

impl SweepResult {
    pub fn non_ci_count(&self) -> u128 {
        self.counterexamples.iter().map(|c| c.orbit_size).sum()
    }

    /// Every swept set is either counted CI or covered by a counterexample
    /// orbit.
    pub fn tally_consistent(&self) -> bool {
        self.ci_count + self.non_ci_count() == self.total_sets
    }
}

/// Amortizes certificate computation across runs. Implementations must key
/// on the orbit-normalized set so equivalent sets share entries.
pub trait CertificateStore: Sync {
    fn get(&self, spec: &GroupSpec, set: &ConnectionSet) -> Option<StoredAnalysis>;
    fn put(&self, spec: &GroupSpec, set: &ConnectionSet, value: &StoredAnalysis);
}

/// The cacheable part of one digraph analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredAnalysis {
    pub certificate: Certificate,
    pub aut_order: Option<u128>,
}

/// The no-op store: every lookup misses.
pub struct NoStore;

impl CertificateStore for NoStore {
    fn get(&self, _spec: &GroupSpec, _set: &ConnectionSet) -> Option<StoredAnalysis> {
        None
    }

    fn put(&self, _spec: &GroupSpec, _set: &ConnectionSet, _value: &StoredAnalysis) {}
}

/// The right-translation group `{x -> x * g}` on the canonical vertex
/// order; always regular and isomorphic to the group it represents.
pub fn right_regular(spec: &GroupSpec) -> PermGroup {
    let order = spec.order();
    let translations: Vec<Perm> = spec
        .elements()
        .into_iter()
        .map(|g| translation_perm(spec, g))
        .collect();
    let mut generators = vec![translation_perm(spec, spec.rotation(1))];
    if spec.kind() == GroupKind::Dihedral {
        generators.push(translation_perm(spec, spec.reflection(0)));
    }
    generators.retain(|p| !p.is_identity());
    let group = PermGroup::from_parts(order, generators, translations);
    debug_assert!(group.is_regular());
    group
}

/// The vertex permutation of right translation by `g`.
pub fn translation_perm(spec: &GroupSpec, g: GroupElement) -> Perm {
    let images: Vec<usize> = (0..spec.order())
        .map(|i| spec.index_of(spec.multiply(spec.element_at(i), g)))
        .collect();
    Perm::from_images(&images).unwrap()
}

/// The vertex permutation induced by a group automorphism.
pub fn automorphism_perm(spec: &GroupSpec, aut: GroupAut) -> Perm {
    let images: Vec<usize> = (0..spec.order())
        .map(|i| spec.index_of(spec.apply_aut(aut, spec.element_at(i))))
        .collect();
    Perm::from_images(&images).unwrap()
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// All size-`m` subsets of the non-identity elements, in lexicographic
/// order over the canonical element order.
fn candidate_sets(spec: &GroupSpec, m: usize) -> impl Iterator<Item = ConnectionSet> + '_ {
    let spec = *spec;
    spec.elements()
        .into_iter()
        .filter(move |&g| !g.is_identity())
        .combinations(m)
        .map(move |elements| ConnectionSet::new(&spec, elements).unwrap())
}

fn check_subset_budget(spec: &GroupSpec, m: usize, budget: &Budget) -> Result<(), CiError> {
    let candidates = binomial(spec.order() as u128 - 1, m as u128);
    if candidates > budget.max_subsets {
        return Err(CiError::SubsetBudgetExceeded {
            candidates,
            max: budget.max_subsets,
        });
    }
    Ok(())
}

struct GraphFacts {
    aut_order: u128,
    aut_generators: Vec<Perm>,
    certificate: Certificate,
    is_normal: bool,
}

fn graph_facts(spec: &GroupSpec, set: &ConnectionSet) -> Result<GraphFacts, CiError> {
    let graph = cayley(spec, set)?;
    let analysis = analyze(&graph);
    let aut_order = analysis.aut_order.ok_or(CiError::AutOrderOverflow)?;
    let ambient = PermGroup::from_generators(spec.order(), analysis.generators.clone(), 1)?;
    let translations = right_regular(spec);
    let is_normal = ambient.is_normal(&translations)?;
    let by_order = aut_order == spec.order() as u128 * set_stabilizer_auts(spec, set).len() as u128;
    debug_assert_eq!(is_normal, by_order);
    Ok(GraphFacts {
        aut_order,
        aut_generators: analysis.generators,
        certificate: analysis.certificate,
        is_normal: is_normal && by_order,
    })
}

/// Decides CI status from the definition: enumerate every same-size set,
/// keep those whose digraphs are isomorphic to `Cay(G, S)`, and check that
/// they are exactly the automorphic images of `S`.
pub fn is_ci_definitional(
    spec: &GroupSpec,
    set: &ConnectionSet,
    budget: &Budget,
) -> Result<CiReport, CiError> {
    check_subset_budget(spec, set.len(), budget)?;
    let facts = graph_facts(spec, set)?;
    let orbit: BTreeSet<ConnectionSet> = spec
        .automorphisms()
        .into_iter()
        .map(|aut| set.apply_aut(spec, aut))
        .collect();

    let mut isomorphic_count: u128 = 0;
    let mut witness = None;
    for candidate in candidate_sets(spec, set.len()) {
        let graph = cayley(spec, &candidate)?;
        if analyze(&graph).certificate != facts.certificate {
            continue;
        }
        isomorphic_count += 1;
        if witness.is_none() && !orbit.contains(&candidate) {
            witness = Some(candidate);
        }
    }
    debug_assert!(isomorphic_count >= orbit.len() as u128);

    let verdict = if isomorphic_count == orbit.len() as u128 {
        Verdict::Ci
    } else {
        Verdict::NotCi
    };
    debug_assert_eq!(verdict == Verdict::NotCi, witness.is_some());
    Ok(CiReport {
        group: *spec,
        set: set.clone(),
        verdict,
        method: Method::Definitional,
        witness,
        rival_subgroup: None,
        conjugator_examples: Vec::new(),
        aut_order: facts.aut_order,
        is_normal_cayley: facts.is_normal,
    })
}

const CONJUGATOR_EXAMPLE_CAP: usize = 8;

/// Decides CI status through the automorphism group: `S` is CI exactly when
/// every regular subgroup of `Aut(Cay(G, S))` isomorphic to `G` is
/// conjugate to the right translations.
pub fn is_ci_babai(
    spec: &GroupSpec,
    set: &ConnectionSet,
    budget: &Budget,
) -> Result<CiReport, CiError> {
    let facts = graph_facts(spec, set)?;
    if facts.aut_order > budget.materialization_cap as u128 {
        return Err(CiError::AutTooLarge {
            order: facts.aut_order,
            cap: budget.materialization_cap,
        });
    }
    let degree = spec.order();
    let ambient = PermGroup::from_generators(
        degree,
        facts.aut_generators.clone(),
        budget.materialization_cap,
    )?;
    let translations = right_regular(spec);
    let translation_class = ambient.subgroup_conjugacy_class(&translations)?;
    let regulars = match spec.kind() {
        GroupKind::Dihedral => ambient.regular_dihedral_subgroups(degree)?,
        GroupKind::Cyclic => ambient.regular_cyclic_subgroups(degree)?,
    };

    let mut rival = None;
    let mut conjugators = Vec::new();
    for candidate in regulars {
        match translation_class.witness_for(&candidate)? {
            Some(witness) => {
                if conjugators.len() < CONJUGATOR_EXAMPLE_CAP {
                    conjugators.push(witness);
                }
            }
            None => {
                rival = Some(candidate);
                break;
            }
        }
    }

    let verdict = if rival.is_none() {
        Verdict::Ci
    } else {
        Verdict::NotCi
    };
    Ok(CiReport {
        group: *spec,
        set: set.clone(),
        verdict,
        method: Method::Babai,
        witness: None,
        rival_subgroup: rival,
        conjugator_examples: conjugators,
        aut_order: facts.aut_order,
        is_normal_cayley: facts.is_normal,
    })
}

/// Runs both deciders and merges their reports. The verdicts agree for
/// every valid input; a mismatch would be a library bug.
pub fn is_ci_both(
    spec: &GroupSpec,
    set: &ConnectionSet,
    budget: &Budget,
) -> Result<CiReport, CiError> {
    let definitional = is_ci_definitional(spec, set, budget)?;
    let babai = is_ci_babai(spec, set, budget)?;
    assert_eq!(
        definitional.verdict, babai.verdict,
        "the two CI deciders disagree on {set}, which should be impossible"
    );
    assert_eq!(definitional.aut_order, babai.aut_order);
    let mut merged = definitional;
    merged.method = Method::Both;
    merged.rival_subgroup = babai.rival_subgroup;
    merged.conjugator_examples = babai.conjugator_examples;
    Ok(merged)
}

/// True iff the right translations are normal in the digraph's automorphism
/// group, equivalently iff that group is exactly the translations extended
/// by the set-preserving group automorphisms.
pub fn is_normal_cayley(spec: &GroupSpec, set: &ConnectionSet) -> Result<bool, CiError> {
    Ok(graph_facts(spec, set)?.is_normal)
}

/// For odd `n`, validates on `Cay(D_2n, S)` that a regular dihedral
/// subgroup is conjugate to the right translations exactly when their
/// rotation subgroups (the unique cyclic subgroups of order `n`) are
/// conjugate. Returns true when the biconditional holds for every regular
/// dihedral subgroup.
pub fn cyclic_core_conjugacy_check(
    spec: &GroupSpec,
    set: &ConnectionSet,
    budget: &Budget,
) -> Result<bool, CiError> {
    if spec.kind() != GroupKind::Dihedral || spec.n().is_multiple_of(2) {
        return Err(CiError::NeedsOddDihedral {
            got: format!("{:?} n={}", spec.kind(), spec.n()),
        });
    }
    let facts = graph_facts(spec, set)?;
    if facts.aut_order > budget.materialization_cap as u128 {
        return Err(CiError::AutTooLarge {
            order: facts.aut_order,
            cap: budget.materialization_cap,
        });
    }
    let degree = spec.order();
    let ambient =
        PermGroup::from_generators(degree, facts.aut_generators, budget.materialization_cap)?;
    let translations = right_regular(spec);
    let translation_class = ambient.subgroup_conjugacy_class(&translations)?;
    let core_class = ambient.subgroup_conjugacy_class(&cyclic_core(&translations))?;
    for candidate in ambient.regular_dihedral_subgroups(degree)? {
        let whole = translation_class.contains(&candidate)?;
        let core = core_class.contains(&cyclic_core(&candidate))?;
        if whole != core {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The rotation subgroup of a regular dihedral group with odd rotation
/// order: exactly the elements of odd order.
fn cyclic_core(dihedral: &PermGroup) -> PermGroup {
    let core: Vec<Perm> = dihedral
        .elements()
        .expect("regular subgroups are materialized")
        .iter()
        .filter(|e| e.order() % 2 == 1)
        .cloned()
        .collect();
    PermGroup::from_closed_elements(dihedral.degree(), core)
}

/// For odd `n`: `Some(true)` when the vertex stabilizer order is coprime to
/// `n`, which forces CI; `None` when the shortcut does not apply. Never
/// returns `Some(false)`.
pub fn coprime_stabilizer_shortcut(
    spec: &GroupSpec,
    set: &ConnectionSet,
) -> Result<Option<bool>, CiError> {
    if spec.kind() != GroupKind::Dihedral || spec.n().is_multiple_of(2) {
        return Err(CiError::NeedsOddDihedral {
            got: format!("{:?} n={}", spec.kind(), spec.n()),
        });
    }
    let facts = graph_facts(spec, set)?;
    let stabilizer_order = facts.aut_order / spec.order() as u128;
    Ok(if gcd_u128(stabilizer_order, spec.n() as u128) == 1 {
        Some(true)
    } else {
        None
    })
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Tests every connection set of size `valency` (inverse-closed only in
/// graph mode, generating sets only with `connected_only`), one certificate
/// per set, one verdict per automorphism orbit.
pub fn m_dci_status(
    spec: &GroupSpec,
    valency: usize,
    mode: Mode,
    connected_only: bool,
    budget: &Budget,
    store: &dyn CertificateStore,
) -> Result<SweepResult, CiError> {
    if valency == 0 {
        return Err(CiError::ZeroValency);
    }
    check_subset_budget(spec, valency, budget)?;
    let auts = spec.automorphisms();
    let order = spec.order();

    let candidates: Vec<ConnectionSet> = candidate_sets(spec, valency)
        .filter(|s| mode == Mode::Digraph || s.is_inverse_closed(spec))
        .filter(|s| !connected_only || generated_subgroup(spec, s).len() == order)
        .collect();

    let certificates: Vec<Certificate> = candidates
        .par_iter()
        .map(|candidate| -> Result<Certificate, CiError> {
            let normalized = candidate.normalized_under(spec, &auts);
            if let Some(stored) = store.get(spec, &normalized) {
                return Ok(stored.certificate);
            }
            let analysis = analyze(&cayley(spec, candidate)?);
            store.put(
                spec,
                &normalized,
                &StoredAnalysis {
                    certificate: analysis.certificate.clone(),
                    aut_order: analysis.aut_order,
                },
            );
            Ok(analysis.certificate)
        })
        .collect::<Result<_, _>>()?;

    let mut bucket_sizes: HashMap<&Certificate, u128> = HashMap::new();
    for certificate in &certificates {
        *bucket_sizes.entry(certificate).or_insert(0) += 1;
    }

    struct Orbit {
        size: u128,
        representative_index: Option<usize>,
    }
    let mut orbits: BTreeMap<ConnectionSet, Orbit> = BTreeMap::new();
    for (index, candidate) in candidates.iter().enumerate() {
        let normalized = candidate.normalized_under(spec, &auts);
        let is_representative = *candidate == normalized;
        let entry = orbits.entry(normalized).or_insert(Orbit {
            size: 0,
            representative_index: None,
        });
        entry.size += 1;
        if is_representative {
            entry.representative_index = Some(index);
        }
    }

    let mut ci_count: u128 = 0;
    let mut counterexamples = Vec::new();
    for (set, orbit) in orbits {
        let index = orbit
            .representative_index
            .expect("an orbit always contains its own normalization");
        let isomorphic = bucket_sizes[&certificates[index]];
        debug_assert!(isomorphic >= orbit.size);
        if isomorphic == orbit.size {
            ci_count += orbit.size;
        } else {
            counterexamples.push(Counterexample {
                set,
                orbit_size: orbit.size,
            });
        }
    }

    let result = SweepResult {
        group: *spec,
        valency,
        mode,
        connected_only,
        total_sets: candidates.len() as u128,
        ci_count,
        counterexamples,
    };
    debug_assert!(result.tally_consistent());
    Ok(result)
}

/// Runs [`m_dci_status`] for every valency `1..=m`; the group has the
/// m-DCI (or m-CI) property exactly when no sweep reports counterexamples.
pub fn m_dci_group_status(
    spec: &GroupSpec,
    m: usize,
    mode: Mode,
    connected_only: bool,
    budget: &Budget,
    store: &dyn CertificateStore,
) -> Result<Vec<SweepResult>, CiError> {
    (1..=m)
        .map(|valency| m_dci_status(spec, valency, mode, connected_only, budget, store))
        .collect()
}

/// Whether theory says a sweep with these parameters finds counterexamples:
/// `Some(true)` means every swept set must be CI, `Some(false)` means a
/// counterexample must exist, `None` means no claim is made.
pub fn predicted_ci(
    spec: &GroupSpec,
    valency: usize,
    mode: Mode,
    connected_only: bool,
) -> Option<bool> {
    let n = spec.n();
    let odd = n % 2 == 1;
    match spec.kind() {
        GroupKind::Dihedral => match (valency, mode) {
            (4, Mode::Digraph) if connected_only => Some(odd),
            (4, Mode::Digraph) => Some(odd && !n.is_multiple_of(9)),
            (4, Mode::Graph) => Some(odd),
            (v, _) if v <= 3 && odd => Some(true),
            (1, _) if !connected_only => Some(false),
            _ => None,
        },
        GroupKind::Cyclic if connected_only && n > 1 => match (valency, mode) {
            (4, Mode::Digraph) if odd && !n.is_multiple_of(9) => Some(true),
            (4, Mode::Graph) => Some(true),
            _ => None,
        },
        GroupKind::Cyclic => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(n: u64) -> GroupSpec {
        GroupSpec::dihedral(n).unwrap()
    }

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn set(spec: &GroupSpec, text: &str) -> ConnectionSet {
        ConnectionSet::parse(spec, text).unwrap()
    }

    fn random_set(spec: &GroupSpec, size: usize, rng: &mut ChaCha8Rng) -> ConnectionSet {
        let mut pool: Vec<GroupElement> = spec
            .elements()
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        pool.shuffle(rng);
        ConnectionSet::new(spec, pool.into_iter().take(size)).unwrap()
    }

    #[test]
    fn right_regular_shape() {
        let trivial = right_regular(&z(1));
        assert_eq!(trivial.order(), Some(1));

        let d3 = right_regular(&d(3));
        assert_eq!(d3.order(), Some(6));
        assert!(d3.is_regular());
        assert!(!d3.is_materialized() || d3.elements().is_ok());

        let z8 = right_regular(&z(8));
        assert_eq!(z8.order(), Some(8));
        assert!(z8.is_regular());
    }

    #[test]
    fn translations_compose_like_the_group() {
        let spec = d(5);
        for g in spec.elements() {
            for h in spec.elements() {
                let combined = translation_perm(&spec, g).then(&translation_perm(&spec, h));
                assert_eq!(combined, translation_perm(&spec, spec.multiply(g, h)));
            }
        }
    }

    #[test]
    fn even_family_rival_generator_relation() {
        // With beta = sigma(-1, 2), right translation by a^2*b followed by
        // beta squares to right translation by a^2.
        for n in [6u64, 8] {
            let spec = d(n);
            let beta = automorphism_perm(&spec, spec.aut(-1, 2).unwrap());
            let t = translation_perm(&spec, spec.reflection(2)).then(&beta);
            assert_eq!(t.then(&t), translation_perm(&spec, spec.rotation(2)));

            let graph_set = set(&spec, &format!("a,a^-1,a*b,a^{}*b", n / 2 + 1));
            let aut = crate::autengine::automorphism_group(&cayley(&spec, &graph_set).unwrap());
            assert!(aut.contains(&t));
            assert!(aut.contains(&translation_perm(&spec, spec.reflection(1))));
        }
    }

    #[test]
    fn definitional_examples() {
        let budget = Budget::default();

        let report = is_ci_definitional(&d(3), &set(&d(3), "a"), &budget).unwrap();
        assert_eq!(report.verdict, Verdict::Ci);
        assert!(report.witness.is_none());

        let spec = d(4);
        let report = is_ci_definitional(&spec, &set(&spec, "a,a^3,a*b,a^3*b"), &budget).unwrap();
        assert_eq!(report.verdict, Verdict::NotCi);
        let witness = report.witness.unwrap();
        assert!(crate::group::sets_equivalent(&spec, &report.set, &witness).is_none());
        assert_eq!(report.aut_order, 1152);
    }

    #[test]
    fn cyclic_nine_has_a_non_ci_generating_quadruple() {
        let spec = z(9);
        let budget = Budget::default();
        let mut found = None;
        for candidate in candidate_sets(&spec, 4) {
            if generated_subgroup(&spec, &candidate).len() != 9 {
                continue;
            }
            let report = is_ci_definitional(&spec, &candidate, &budget).unwrap();
            if report.verdict == Verdict::NotCi {
                found = Some(candidate);
                break;
            }
        }
        let witness_set = found.expect("a non-CI generating 4-subset of Z_9 exists");
        let babai = is_ci_babai(&spec, &witness_set, &budget).unwrap();
        assert_eq!(babai.verdict, Verdict::NotCi);
        assert!(babai.rival_subgroup.is_some());
    }

    #[test]
    fn babai_examples() {
        let budget = Budget::default();

        let report = is_ci_babai(&d(3), &set(&d(3), "a,a^2,a^2*b,b"), &budget).unwrap();
        assert_eq!(report.verdict, Verdict::Ci);
        assert!(report.rival_subgroup.is_none());
        assert!(!report.conjugator_examples.is_empty());

        let report = is_ci_babai(&d(4), &set(&d(4), "a,a^3,a*b,a^3*b"), &budget).unwrap();
        assert_eq!(report.verdict, Verdict::NotCi);
        let rival = report.rival_subgroup.unwrap();
        assert_eq!(rival.order(), Some(8));
        assert!(rival.is_regular());

        let spec = d(6);
        let report = is_ci_babai(&spec, &set(&spec, "a,a^5,a*b,a^4*b"), &budget).unwrap();
        assert_eq!(report.verdict, Verdict::NotCi);
        assert!(report.is_normal_cayley);
        assert_eq!(report.aut_order, 8 * 6);
    }

    #[test]
    fn both_methods_merge_into_one_report() {
        let spec = d(4);
        let report = is_ci_both(&spec, &set(&spec, "a,a^3,a*b,a^3*b"), &Budget::default()).unwrap();
        assert_eq!(report.method, Method::Both);
        assert_eq!(report.verdict, Verdict::NotCi);
        assert!(report.witness.is_some());
        assert!(report.rival_subgroup.is_some());
    }

    #[test]
    fn normality_examples() {
        assert!(is_normal_cayley(&d(13), &set(&d(13), "b,a*b,a^4*b")).unwrap());
        assert!(!is_normal_cayley(&d(3), &set(&d(3), "a,a^2,a^2*b,b")).unwrap());
        assert!(!is_normal_cayley(&d(7), &set(&d(7), "b,a*b,a^3*b")).unwrap());
    }

    #[test]
    fn cyclic_core_check_examples() {
        let budget = Budget::default();
        assert!(cyclic_core_conjugacy_check(&d(3), &set(&d(3), "a"), &budget).unwrap());
        assert!(cyclic_core_conjugacy_check(&d(5), &set(&d(5), "a,a^4,a^2*b,b"), &budget).unwrap());
        assert!(cyclic_core_conjugacy_check(&d(3), &set(&d(3), "a,a^2,b"), &budget).unwrap());
        assert!(matches!(
            cyclic_core_conjugacy_check(&d(4), &set(&d(4), "a"), &budget),
            Err(CiError::NeedsOddDihedral { .. })
        ));
    }

    #[test]
    fn stabilizer_shortcut_examples() {
        let spec = d(5);
        let shortcut = coprime_stabilizer_shortcut(&spec, &set(&spec, "a,a^2,a^3*b")).unwrap();
        assert_eq!(shortcut, Some(true));
        let confirmed =
            is_ci_definitional(&spec, &set(&spec, "a,a^2,a^3*b"), &Budget::default()).unwrap();
        assert_eq!(confirmed.verdict, Verdict::Ci);

        let spec = d(3);
        let shortcut = coprime_stabilizer_shortcut(&spec, &set(&spec, "b,a*b,a^2*b")).unwrap();
        assert_eq!(shortcut, None);

        assert!(matches!(
            coprime_stabilizer_shortcut(&d(6), &set(&d(6), "a")),
            Err(CiError::NeedsOddDihedral { .. })
        ));
        assert!(matches!(
            coprime_stabilizer_shortcut(&z(5), &set(&z(5), "a")),
            Err(CiError::NeedsOddDihedral { .. })
        ));
    }

    #[test]
    fn shortcut_never_contradicts_the_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let budget = Budget::default();
        for n in [3u64, 5] {
            let spec = d(n);
            for _ in 0..10 {
                let size = rng.gen_range(1..=4);
                let sample = random_set(&spec, size, &mut rng);
                if coprime_stabilizer_shortcut(&spec, &sample).unwrap() == Some(true) {
                    let report = is_ci_definitional(&spec, &sample, &budget).unwrap();
                    assert_eq!(report.verdict, Verdict::Ci, "set {sample}");
                }
            }
        }
    }

    #[test]
    fn sweep_small_dihedral_valency_four() {
        let budget = Budget::default();
        let clean = m_dci_status(&d(5), 4, Mode::Digraph, false, &budget, &NoStore).unwrap();
        assert!(clean.tally_consistent());
        assert_eq!(clean.total_sets, 126);
        assert!(clean.counterexamples.is_empty());

        let broken = m_dci_status(&d(4), 4, Mode::Digraph, false, &budget, &NoStore).unwrap();
        assert!(broken.tally_consistent());
        assert!(!broken.counterexamples.is_empty());
        for example in &broken.counterexamples {
            assert_eq!(example.set, example.set.normalized(&broken.group));
        }
    }

    #[test]
    fn graph_mode_sweeps_only_inverse_closed_sets() {
        let budget = Budget::default();
        let result = m_dci_status(&d(3), 3, Mode::Graph, false, &budget, &NoStore).unwrap();
        let by_hand = candidate_sets(&d(3), 3)
            .filter(|s| s.is_inverse_closed(&d(3)))
            .count() as u128;
        assert_eq!(result.total_sets, by_hand);
        assert!(result.counterexamples.is_empty());
    }

    #[test]
    fn connected_only_restricts_to_generating_sets() {
        let budget = Budget::default();
        let spec = d(3);
        let all = m_dci_status(&spec, 2, Mode::Digraph, false, &budget, &NoStore).unwrap();
        let connected = m_dci_status(&spec, 2, Mode::Digraph, true, &budget, &NoStore).unwrap();
        assert!(connected.total_sets < all.total_sets);
        let by_hand = candidate_sets(&spec, 2)
            .filter(|s| generated_subgroup(&spec, s).len() == 6)
            .count() as u128;
        assert_eq!(connected.total_sets, by_hand);
    }

    #[test]
    fn group_status_runs_every_valency() {
        let results =
            m_dci_group_status(&d(3), 3, Mode::Digraph, false, &Budget::default(), &NoStore)
                .unwrap();
        assert_eq!(results.len(), 3);
        for result in &results {
            assert!(result.tally_consistent());
            assert!(result.counterexamples.is_empty());
        }
    }

    #[test]
    fn orbit_mates_share_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let spec = d(4);
        let budget = Budget::default();
        for _ in 0..6 {
            let size = rng.gen_range(1..=4);
            let sample = random_set(&spec, size, &mut rng);
            let auts = spec.automorphisms();
            let mate = sample.apply_aut(&spec, *auts.choose(&mut rng).unwrap());
            let verdict_s = is_ci_definitional(&spec, &sample, &budget).unwrap().verdict;
            let verdict_t = is_ci_definitional(&spec, &mate, &budget).unwrap().verdict;
            assert_eq!(verdict_s, verdict_t, "orbit pair {sample} / {mate}");
        }
    }

    #[test]
    fn complement_duality_smallest_dihedral() {
        let spec = d(3);
        let budget = Budget::default();
        let everything: Vec<GroupElement> = spec
            .elements()
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        for size in 1..everything.len() {
            for sample in candidate_sets(&spec, size) {
                let complement = ConnectionSet::new(
                    &spec,
                    everything.iter().copied().filter(|&g| !sample.contains(g)),
                )
                .unwrap();
                let verdict_s = is_ci_definitional(&spec, &sample, &budget).unwrap().verdict;
                let verdict_c = is_ci_definitional(&spec, &complement, &budget)
                    .unwrap()
                    .verdict;
                assert_eq!(
                    verdict_s, verdict_c,
                    "set {sample} vs complement {complement}"
                );
            }
        }
    }

    #[test]
    fn method_agreement_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let budget = Budget::default();
        for spec in [d(3), d(5), z(7), z(8)] {
            for _ in 0..8 {
                let size = rng.gen_range(1..=4.min(spec.order() - 2));
                let sample = random_set(&spec, size, &mut rng);
                let report = is_ci_both(&spec, &sample, &budget).unwrap();
                assert!(report.aut_order > 0);
            }
        }
    }

    #[test]
    fn budget_refusals() {
        let tiny = Budget {
            max_subsets: 10,
            materialization_cap: DEFAULT_MATERIALIZATION_CAP,
        };
        assert!(matches!(
            is_ci_definitional(&d(5), &set(&d(5), "a,a^2,a^3,a^4"), &tiny),
            Err(CiError::SubsetBudgetExceeded {
                candidates: 126,
                max: 10
            })
        ));

        // The disconnected valency-4 digraph below has automorphism group
        // order 2654208, past the default cap.
        let spec = d(8);
        let report = is_ci_babai(&spec, &set(&spec, "a,a^3,a^5,a^7"), &Budget::default());
        assert!(matches!(
            report,
            Err(CiError::AutTooLarge {
                order: 2_654_208,
                ..
            })
        ));

        assert!(matches!(
            m_dci_status(&d(8), 0, Mode::Digraph, false, &Budget::default(), &NoStore),
            Err(CiError::ZeroValency)
        ));
    }

    #[test]
    fn sweep_results_are_store_transparent() {
        use std::sync::Mutex;

        struct MapStore {
            entries: Mutex<HashMap<(GroupSpec, ConnectionSet), StoredAnalysis>>,
            hits: Mutex<usize>,
        }
        impl CertificateStore for MapStore {
            fn get(&self, spec: &GroupSpec, set: &ConnectionSet) -> Option<StoredAnalysis> {
                let found = self
                    .entries
                    .lock()
                    .unwrap()
                    .get(&(*spec, set.clone()))
                    .cloned();
                if found.is_some() {
                    *self.hits.lock().unwrap() += 1;
                }
                found
            }
            fn put(&self, spec: &GroupSpec, set: &ConnectionSet, value: &StoredAnalysis) {
                self.entries
                    .lock()
                    .unwrap()
                    .insert((*spec, set.clone()), value.clone());
            }
        }

        let store = MapStore {
            entries: Mutex::new(HashMap::new()),
            hits: Mutex::new(0),
        };
        let budget = Budget::default();
        let spec = d(4);
        let fresh = m_dci_status(&spec, 3, Mode::Digraph, false, &budget, &NoStore).unwrap();
        let first = m_dci_status(&spec, 3, Mode::Digraph, false, &budget, &store).unwrap();
        let hits_after_first = *store.hits.lock().unwrap();
        let second = m_dci_status(&spec, 3, Mode::Digraph, false, &budget, &store).unwrap();
        let hits_after_second = *store.hits.lock().unwrap();
        assert_eq!(
            (hits_after_second - hits_after_first) as u128,
            second.total_sets
        );

        for (left, right) in [(&fresh, &first), (&first, &second)] {
            assert_eq!(left.total_sets, right.total_sets);
            assert_eq!(left.ci_count, right.ci_count);
            assert_eq!(left.counterexamples.len(), right.counterexamples.len());
            for (a, b) in left.counterexamples.iter().zip(&right.counterexamples) {
                assert_eq!(a.set, b.set);
                assert_eq!(a.orbit_size, b.orbit_size);
            }
        }
    }

    #[test]
    fn predictions_follow_parity_and_divisibility_rules() {
        assert_eq!(predicted_ci(&d(5), 4, Mode::Digraph, false), Some(true));
        assert_eq!(predicted_ci(&d(9), 4, Mode::Digraph, false), Some(false));
        assert_eq!(predicted_ci(&d(9), 4, Mode::Graph, false), Some(true));
        assert_eq!(predicted_ci(&d(4), 4, Mode::Graph, false), Some(false));
        assert_eq!(predicted_ci(&d(7), 2, Mode::Digraph, false), Some(true));
        assert_eq!(predicted_ci(&z(11), 4, Mode::Digraph, true), Some(true));
        assert_eq!(predicted_ci(&z(9), 4, Mode::Digraph, true), None);
        assert_eq!(predicted_ci(&z(9), 4, Mode::Graph, true), Some(true));
        assert_eq!(predicted_ci(&z(9), 4, Mode::Digraph, false), None);
        assert_eq!(predicted_ci(&d(5), 5, Mode::Digraph, false), None);
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(17, 4), 2380);
        assert_eq!(binomial(3, 5), 0);
    }
}
