//! Cayley digraphs over dihedral and cyclic groups.
//!
//! The crate builds Cayley digraphs `Cay(G, S)` for `G` dihedral or cyclic,
//! computes their full automorphism groups with a partition-refinement
//! canonical-form engine, and decides whether a connection set `S` is a
//! CI-subset: whether every `T` with `Cay(G, T)` isomorphic to `Cay(G, S)`
//! is already the image of `S` under a group automorphism.
//!
//! Layering, from the bottom up:
//!
//! * [`perm`] and [`permgroup`]: permutations of a fixed finite domain and
//!   groups of them (closure, orbits, conjugacy, regular subgroups).
//! * [`group`]: dihedral and cyclic groups in coordinate form, their
//!   automorphisms, and the text syntax for elements and connection sets.
//! * [`digraph`]: dense digraphs, Cayley and named constructions, quotients,
//!   lexicographic products, and a plain-text arc-list format.
//! * [`autengine`]: canonical forms, certificates, automorphism groups, and
//!   isomorphism testing for digraphs.
//! * [`citester`]: CI verdicts for single sets (two independent methods) and
//!   exhaustive sweeps over all connection sets of a given valency.

pub mod autengine;
pub mod citester;
pub mod digraph;
pub mod group;
pub mod perm;
pub mod permgroup;

mod schreier;
