//! Automorphism groups, canonical forms, and isomorphism of digraphs.
//!
//! The engine runs an individualization-refinement search. Partitions are
//! refined to equitability by splitting color classes on (out, in) neighbor
//! counts into every class; non-discrete partitions branch on the vertices
//! of the first smallest non-singleton class. Each tree node carries a
//! label-invariant signature (class sizes plus the quotient count matrix),
//! and each discrete leaf yields a relabeled adjacency table:
//!
//! * the first leaf is kept as the anchor for automorphism detection: any
//!   later leaf with the same signature path and the same relabeled table
//!   differs from it by an automorphism;
//! * the leaf with the lexicographically greatest (signature path, table)
//!   pair defines the canonical form;
//! * discovered automorphisms prune sibling branches whose individualized
//!   vertex lies in the orbit of an already-explored one (computed in the
//!   subgroup fixing the node's individualized prefix pointwise).
//!
//! Both prunings are essential: several fixtures have automorphism groups
//! near a million elements, which a plain backtracking search cannot
//! enumerate leaf by leaf.
//!
//! The 64-vertex engine limit coincides with the digraph type's own vertex
//! cap, so every constructible [`Digraph`] is accepted and the operations
//! here are total.

use crate::digraph::{Digraph, MAX_VERTICES};
use crate::perm::Perm;
use crate::permgroup::{PermGroup, DEFAULT_MATERIALIZATION_CAP};
use crate::schreier::StabChain;

/// Largest vertex count the search accepts; equal to the digraph cap.
pub const ENGINE_VERTEX_LIMIT: usize = MAX_VERTICES;

/// A vertex coloring with contiguous color indices; color classes form the
/// ordered partition that the refinement loop operates on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    color_of: Vec<u32>,
}

impl Coloring {
    /// The all-one-color start state on `n` vertices.
    pub fn uniform(n: usize) -> Coloring {
        Coloring {
            color_of: vec![0; n],
        }
    }

    #[cfg(test)]
    fn from_cells(n: usize, cells: &[Vec<usize>]) -> Coloring {
        let mut color_of = vec![0u32; n];
        for (color, cell) in cells.iter().enumerate() {
            for &v in cell {
                color_of[v] = color as u32;
            }
        }
        Coloring { color_of }
    }

    pub fn color_of(&self, v: usize) -> u32 {
        self.color_of[v]
    }

    pub fn num_colors(&self) -> usize {
        self.color_of.iter().max().map_or(0, |&c| c as usize + 1)
    }

    /// Color classes in color order, each ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors()];
        for (v, &c) in self.color_of.iter().enumerate() {
            classes[c as usize].push(v);
        }
        classes
    }

    pub fn is_discrete(&self) -> bool {
        self.num_colors() == self.color_of.len()
    }
}

/// The sorted arc list of the canonically relabeled digraph. Two digraphs
/// have equal certificates exactly when they are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    vertex_count: usize,
    arcs: Vec<(u16, u16)>,
}

impl Certificate {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &[(u16, u16)] {
        &self.arcs
    }

    /// The canonical representative as a digraph.
    pub fn to_digraph(&self) -> Digraph {
        Digraph::from_arcs(
            self.vertex_count,
            self.arcs.iter().map(|&(t, h)| (t as usize, h as usize)),
        )
        .unwrap()
    }

    /// Wraps a digraph that is already in canonical form, without searching.
    /// Intended for deserializing stored certificates.
    pub fn assume_canonical(digraph: &Digraph) -> Certificate {
        Certificate {
            vertex_count: digraph.vertex_count(),
            arcs: digraph
                .arcs()
                .into_iter()
                .map(|(t, h)| (t as u16, h as u16))
                .collect(),
        }
    }

    fn from_rows(rows: &[u64]) -> Certificate {
        let mut arcs = Vec::new();
        for (tail, &row) in rows.iter().enumerate() {
            let mut bits = row;
            while bits != 0 {
                let head = bits.trailing_zeros() as u16;
                arcs.push((tail as u16, head));
                bits &= bits - 1;
            }
        }
        Certificate {
            vertex_count: rows.len(),
            arcs,
        }
    }
}

/// Everything one search pass produces.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// Generators of the full automorphism group.
    pub generators: Vec<Perm>,
    /// Exact automorphism group order (`None` beyond u128).
    pub aut_order: Option<u128>,
    pub certificate: Certificate,
    /// Maps each vertex to its position in the canonical labeling.
    pub canonical_labeling: Perm,
}

/// Runs the search once and reports generators, order, and canonical data.
pub fn analyze(digraph: &Digraph) -> Analysis {
    let mut search = Search::new(digraph);
    search.run();
    let best = search.best.expect("search always reaches a leaf");
    let aut_order = StabChain::new(digraph.vertex_count(), &search.generators).order();
    Analysis {
        generators: search.generators,
        aut_order,
        certificate: Certificate::from_rows(&best.rows),
        canonical_labeling: best.labeling,
    }
}

/// The full automorphism group of the digraph.
pub fn automorphism_group(digraph: &Digraph) -> PermGroup {
    let analysis = analyze(digraph);
    PermGroup::from_generators(
        digraph.vertex_count(),
        analysis.generators,
        DEFAULT_MATERIALIZATION_CAP,
    )
    .expect("engine generators share the digraph's degree")
}

/// A certificate equal across all relabelings of the digraph.
pub fn canonical_form(digraph: &Digraph) -> Certificate {
    analyze(digraph).certificate
}

/// An explicit isomorphism carrying arcs of `g1` onto arcs of `g2`, if any.
pub fn isomorphism(g1: &Digraph, g2: &Digraph) -> Option<Perm> {
    if g1.vertex_count() != g2.vertex_count() || g1.arc_count() != g2.arc_count() {
        return None;
    }
    let a1 = analyze(g1);
    let a2 = analyze(g2);
    if a1.certificate != a2.certificate {
        return None;
    }
    let iso = a1.canonical_labeling.then(&a2.canonical_labeling.inverse());
    debug_assert!(is_arc_preserving(g1, g2, &iso));
    Some(iso)
}

fn is_arc_preserving(g1: &Digraph, g2: &Digraph, map: &Perm) -> bool {
    g1.arcs()
        .into_iter()
        .all(|(t, h)| g2.has_arc(map.apply(t), map.apply(h)))
        && g1.arc_count() == g2.arc_count()
}

/// Node signature: number of classes, then per class its size and the
/// (out, in) arc counts from one of its members into every class. Equal
/// signatures imply equal discreteness, so signature paths of two leaves
/// always have equal length or differ at some level.
type Sig = Vec<u16>;

#[derive(Clone)]
struct Leaf {
    sigs: Vec<Sig>,
    rows: Vec<u64>,
    labeling: Perm,
}

struct Search<'a> {
    digraph: &'a Digraph,
    n: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Perm>,
}

impl<'a> Search<'a> {
    fn new(digraph: &'a Digraph) -> Search<'a> {
        Search {
            digraph,
            n: digraph.vertex_count(),
            first: None,
            best: None,
            generators: Vec::new(),
        }
    }

    fn run(&mut self) {
        let root = vec![(0..self.n).collect::<Vec<usize>>()];
        let mut prefix = Vec::new();
        let mut sigs = Vec::new();
        self.explore(root, &mut prefix, &mut sigs);
    }

    fn explore(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>, sigs: &mut Vec<Sig>) {
        let cells = self.refine(cells);
        let sig = self.signature(&cells);
        let depth = sigs.len();

        // A later leaf can only be automorphic to the first leaf if its
        // whole signature path matches, so branches that still agree with
        // the first path are exempt from canonical pruning.
        let matches_first = match &self.first {
            None => true,
            Some(first) => {
                first.sigs.get(depth) == Some(&sig)
                    && (depth == 0 || sigs[..] == first.sigs[..depth])
            }
        };
        // Paths deeper than the best leaf's path were already beaten at an
        // earlier level (equal signatures force equal discreteness), so a
        // missing best signature prunes like a smaller one.
        let vs_best = self
            .best
            .as_ref()
            .map(|best| best.sigs.get(depth).map(|s| sig.cmp(s)));
        match vs_best {
            None | Some(Some(std::cmp::Ordering::Equal)) => {}
            Some(Some(std::cmp::Ordering::Greater)) => self.best = None,
            Some(Some(std::cmp::Ordering::Less)) | Some(None) => {
                if !matches_first {
                    return;
                }
            }
        }

        sigs.push(sig);
        if cells.iter().all(|c| c.len() == 1) {
            self.visit_leaf(&cells, sigs, matches_first);
        } else {
            let target = cells
                .iter()
                .enumerate()
                .filter(|(_, c)| c.len() > 1)
                .min_by_key(|(i, c)| (c.len(), *i))
                .map(|(i, _)| i)
                .unwrap();
            let candidates = cells[target].clone();
            let mut tried: Vec<usize> = Vec::new();
            for &v in &candidates {
                if self.in_tried_orbit(v, &tried, prefix) {
                    continue;
                }
                tried.push(v);
                let mut child = Vec::with_capacity(cells.len() + 1);
                for (i, cell) in cells.iter().enumerate() {
                    if i == target {
                        child.push(vec![v]);
                        child.push(cell.iter().copied().filter(|&u| u != v).collect());
                    } else {
                        child.push(cell.clone());
                    }
                }
                prefix.push(v);
                self.explore(child, prefix, sigs);
                prefix.pop();
            }
        }
        sigs.pop();
    }

    fn visit_leaf(&mut self, cells: &[Vec<usize>], sigs: &[Sig], matches_first: bool) {
        let rows = self.relabeled_rows(cells);
        let mut labeling_images = vec![0usize; self.n];
        for (position, cell) in cells.iter().enumerate() {
            labeling_images[cell[0]] = position;
        }
        let labeling = Perm::from_images(&labeling_images).unwrap();

        let Some(first) = &self.first else {
            let leaf = Leaf {
                sigs: sigs.to_vec(),
                rows,
                labeling,
            };
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return;
        };

        if matches_first && sigs.len() == first.sigs.len() && rows == first.rows {
            self.record_automorphism(&labeling, &first.labeling.clone());
            return;
        }
        match &self.best {
            None => {
                self.best = Some(Leaf {
                    sigs: sigs.to_vec(),
                    rows,
                    labeling,
                });
            }
            Some(best) => {
                let ord = sigs.cmp(&best.sigs[..]).then_with(|| rows.cmp(&best.rows));
                match ord {
                    std::cmp::Ordering::Greater => {
                        self.best = Some(Leaf {
                            sigs: sigs.to_vec(),
                            rows,
                            labeling,
                        });
                    }
                    std::cmp::Ordering::Equal => {
                        self.record_automorphism(&labeling, &best.labeling.clone());
                    }
                    std::cmp::Ordering::Less => {}
                }
            }
        }
    }

    /// Two leaves with equal relabeled tables differ by the automorphism
    /// sending each vertex to the one holding the same canonical position.
    fn record_automorphism(&mut self, current: &Perm, anchor: &Perm) {
        let auto = current.then(&anchor.inverse());
        if auto.is_identity() {
            return;
        }
        debug_assert!(is_arc_preserving(self.digraph, self.digraph, &auto));
        self.generators.push(auto);
    }

    /// Whether `v` lies in the orbit of an already-tried sibling under the
    /// discovered automorphisms that fix the current prefix pointwise.
    fn in_tried_orbit(&self, v: usize, tried: &[usize], prefix: &[usize]) -> bool {
        if tried.is_empty() || self.generators.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for gen in &self.generators {
            if prefix.iter().any(|&p| gen.apply(p) != p) {
                continue;
            }
            for u in 0..self.n {
                let (a, b) = (find(&mut parent, u), find(&mut parent, gen.apply(u)));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, v);
        tried.iter().any(|&u| find(&mut parent, u) == root)
    }

    /// Splits cells on (out, in) counts into every cell until equitable.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        'sweep: loop {
            let masks: Vec<u64> = cells.iter().map(|c| mask_of(c)).collect();
            for index in 0..cells.len() {
                if cells[index].len() <= 1 {
                    continue;
                }
                let mut keyed: Vec<(Vec<u16>, usize)> = cells[index]
                    .iter()
                    .map(|&v| (self.count_key(v, &masks), v))
                    .collect();
                keyed.sort_unstable();
                if keyed.first().unwrap().0 == keyed.last().unwrap().0 {
                    continue;
                }
                let mut replacement: Vec<Vec<usize>> = Vec::new();
                for (key, v) in keyed {
                    match replacement.last_mut() {
                        Some(last) if self.count_key(last[0], &masks) == key => last.push(v),
                        _ => replacement.push(vec![v]),
                    }
                }
                cells.splice(index..=index, replacement);
                continue 'sweep;
            }
            return cells;
        }
    }

    fn count_key(&self, v: usize, masks: &[u64]) -> Vec<u16> {
        let mut key = Vec::with_capacity(masks.len());
        for &mask in masks {
            let out = (self.digraph.out_row(v) & mask).count_ones() as u16;
            let into = (self.digraph.in_row(v) & mask).count_ones() as u16;
            key.push(out << 8 | into);
        }
        key
    }

    fn signature(&self, cells: &[Vec<usize>]) -> Sig {
        let masks: Vec<u64> = cells.iter().map(|c| mask_of(c)).collect();
        let mut sig = Vec::with_capacity(1 + cells.len() * (1 + masks.len()));
        sig.push(cells.len() as u16);
        for cell in cells {
            sig.push(cell.len() as u16);
            sig.extend(self.count_key(cell[0], &masks));
        }
        sig
    }

    fn relabeled_rows(&self, cells: &[Vec<usize>]) -> Vec<u64> {
        let mut rows = vec![0u64; self.n];
        for (p, tail_cell) in cells.iter().enumerate() {
            for (q, head_cell) in cells.iter().enumerate() {
                if self.digraph.has_arc(tail_cell[0], head_cell[0]) {
                    rows[p] |= 1 << q;
                }
            }
        }
        rows
    }
}

fn mask_of(cell: &[usize]) -> u64 {
    cell.iter().fold(0u64, |mask, &v| mask | 1 << v)
}
