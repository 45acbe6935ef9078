//! Dense loop-free digraphs on at most 64 vertices.
//!
//! Adjacency is stored as one `u64` bit row per vertex in each direction, so
//! the refinement loop of the automorphism engine can count neighbors with
//! popcounts. Construction covers Cayley digraphs over [`GroupSpec`] groups,
//! a few named families, quotients by vertex partitions, and lexicographic
//! products, plus a plain-text arc-list serialization.

use std::fmt::Write as _;

use thiserror::Error;

use crate::group::{ConnectionSet, GroupSpec};
use crate::permgroup::Partition;

/// Hard vertex limit imposed by the bit-row representation.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum DigraphError {
    #[error("digraphs need at least one vertex")]
    NoVertices,
    #[error("{0} vertices exceed the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex {vertex} is out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("loop arcs are not allowed (vertex {0})")]
    LoopArc(usize),
    #[error("distance sets are defined on graphs; this digraph is not symmetric")]
    NotAGraph,
    #[error("partition degree {found} does not match the vertex count {expected}")]
    PartitionMismatch { expected: usize, found: usize },
    #[error("line {line}: expected {expected}")]
    BadTextLine { line: usize, expected: &'static str },
    #[error("text form is empty")]
    EmptyText,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// A digraph on `{0, ..., vertex_count-1}` without loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    vertex_count: usize,
    out_rows: Vec<u64>,
    in_rows: Vec<u64>,
}

impl Digraph {
    pub fn new(vertex_count: usize) -> Result<Digraph, DigraphError> {
        if vertex_count == 0 {
            return Err(DigraphError::NoVertices);
        }
        if vertex_count > MAX_VERTICES {
            return Err(DigraphError::TooManyVertices(vertex_count));
        }
        Ok(Digraph {
            vertex_count,
            out_rows: vec![0; vertex_count],
            in_rows: vec![0; vertex_count],
        })
    }

    pub fn from_arcs(
        vertex_count: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Digraph, DigraphError> {
        let mut digraph = Digraph::new(vertex_count)?;
        for (tail, head) in arcs {
            digraph.add_arc(tail, head)?;
        }
        Ok(digraph)
    }

    /// Inserts one arc; repeated insertion is harmless.
    pub fn add_arc(&mut self, tail: usize, head: usize) -> Result<(), DigraphError> {
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        if tail == head {
            return Err(DigraphError::LoopArc(tail));
        }
        self.out_rows[tail] |= 1 << head;
        self.in_rows[head] |= 1 << tail;
        Ok(())
    }

    /// Inserts the arc in both directions.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), DigraphError> {
        self.add_arc(u, v)?;
        self.add_arc(v, u)
    }

    fn check_vertex(&self, v: usize) -> Result<(), DigraphError> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(DigraphError::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count,
            })
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        self.out_rows[tail] >> head & 1 == 1
    }

    #[inline]
    pub(crate) fn out_row(&self, v: usize) -> u64 {
        self.out_rows[v]
    }

    #[inline]
    pub(crate) fn in_row(&self, v: usize) -> u64 {
        self.in_rows[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_rows[v].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_rows[v].count_ones() as usize
    }

    /// All arcs as (tail, head), sorted.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::new();
        for tail in 0..self.vertex_count {
            let mut row = self.out_rows[tail];
            while row != 0 {
                let head = row.trailing_zeros() as usize;
                arcs.push((tail, head));
                row &= row - 1;
            }
        }
        arcs
    }

    pub fn arc_count(&self) -> usize {
        self.out_rows
            .iter()
            .map(|row| row.count_ones() as usize)
            .sum()
    }

    /// True iff the arc relation is symmetric.
    pub fn is_graph(&self) -> bool {
        self.out_rows == self.in_rows
    }

    pub fn neighbors(&self, v: usize, direction: Direction) -> Result<Vec<usize>, DigraphError> {
        self.check_vertex(v)?;
        let row = match direction {
            Direction::Out => self.out_rows[v],
            Direction::In => self.in_rows[v],
        };
        Ok(bits(row))
    }

    /// True iff every ordered vertex pair is joined by a directed path.
    pub fn strongly_connected(&self) -> bool {
        self.reaches_all(0, Direction::Out) && self.reaches_all(0, Direction::In)
    }

    fn reaches_all(&self, start: usize, direction: Direction) -> bool {
        let rows = match direction {
            Direction::Out => &self.out_rows,
            Direction::In => &self.in_rows,
        };
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for v in bits(frontier) {
                next |= rows[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == self.vertex_count
    }

    /// Vertices at graph distance exactly `k` from `v`. Defined only for
    /// symmetric digraphs.
    pub fn distance_set(&self, v: usize, k: usize) -> Result<Vec<usize>, DigraphError> {
        self.check_vertex(v)?;
        if !self.is_graph() {
            return Err(DigraphError::NotAGraph);
        }
        let mut seen = 1u64 << v;
        let mut layer = seen;
        for _ in 0..k {
            let mut next = 0u64;
            for u in bits(layer) {
                next |= self.out_rows[u];
            }
            layer = next & !seen;
            seen |= layer;
            if layer == 0 {
                break;
            }
        }
        Ok(bits(layer))
    }

    /// The block digraph: blocks are vertices, with an arc between two
    /// distinct blocks whenever some arc joins them. Never has loops.
    pub fn quotient(&self, partition: &Partition) -> Result<Digraph, DigraphError> {
        if partition.degree() != self.vertex_count {
            return Err(DigraphError::PartitionMismatch {
                expected: self.vertex_count,
                found: partition.degree(),
            });
        }
        let mut quotient = Digraph::new(partition.num_blocks())?;
        for (tail, head) in self.arcs() {
            let tail_block = partition.block_of(tail);
            let head_block = partition.block_of(head);
            if tail_block != head_block {
                quotient.add_arc(tail_block, head_block)?;
            }
        }
        Ok(quotient)
    }

    /// Lexicographic product: vertex (x, y) is `x * |V(other)| + y`, and
    /// (x1, y1) -> (x2, y2) iff x1 = x2 with y1 -> y2, or x1 -> x2.
    pub fn lex_product(&self, other: &Digraph) -> Result<Digraph, DigraphError> {
        let count = self
            .vertex_count
            .checked_mul(other.vertex_count)
            .ok_or(DigraphError::TooManyVertices(usize::MAX))?;
        let mut product = Digraph::new(count)?;
        let stride = other.vertex_count;
        for x1 in 0..self.vertex_count {
            for y1 in 0..stride {
                for y2 in bits(other.out_rows[y1]) {
                    product.add_arc(x1 * stride + y1, x1 * stride + y2)?;
                }
                for x2 in bits(self.out_rows[x1]) {
                    for y2 in 0..stride {
                        product.add_arc(x1 * stride + y1, x2 * stride + y2)?;
                    }
                }
            }
        }
        Ok(product)
    }

    /// The undirected cycle on `n` vertices.
    pub fn cycle(n: usize) -> Result<Digraph, DigraphError> {
        let mut digraph = Digraph::new(n)?;
        if n >= 2 {
            for v in 0..n {
                digraph.add_edge(v, (v + 1) % n)?;
            }
        }
        Ok(digraph)
    }

    /// The directed cycle on `n` vertices.
    pub fn directed_cycle(n: usize) -> Result<Digraph, DigraphError> {
        let mut digraph = Digraph::new(n)?;
        if n >= 2 {
            for v in 0..n {
                digraph.add_arc(v, (v + 1) % n)?;
            }
        }
        Ok(digraph)
    }

    /// Complete bipartite graph with parts `{0..m}` and `{m..m+n}`.
    pub fn complete_bipartite(m: usize, n: usize) -> Result<Digraph, DigraphError> {
        if m == 0 || n == 0 {
            return Err(DigraphError::NoVertices);
        }
        let mut digraph = Digraph::new(m + n)?;
        for u in 0..m {
            for v in m..m + n {
                digraph.add_edge(u, v)?;
            }
        }
        Ok(digraph)
    }

    /// Complete bipartite orientation with all heads in the second part.
    pub fn oriented_complete_bipartite(m: usize, n: usize) -> Result<Digraph, DigraphError> {
        if m == 0 || n == 0 {
            return Err(DigraphError::NoVertices);
        }
        let mut digraph = Digraph::new(m + n)?;
        for u in 0..m {
            for v in m..m + n {
                digraph.add_arc(u, v)?;
            }
        }
        Ok(digraph)
    }

    /// The arcless digraph on `m` vertices.
    pub fn empty_graph(m: usize) -> Result<Digraph, DigraphError> {
        Digraph::new(m)
    }

    /// Serialization: a vertex-count header line, then one `tail head` line
    /// per arc in sorted order.
    pub fn to_text(&self) -> String {
        let mut text = String::new();
        writeln!(text, "{}", self.vertex_count).unwrap();
        for (tail, head) in self.arcs() {
            writeln!(text, "{tail} {head}").unwrap();
        }
        text
    }

    /// Parses the [`to_text`](Digraph::to_text) format. Blank lines are
    /// ignored; repeated arcs are harmless.
    pub fn from_text(text: &str) -> Result<Digraph, DigraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(DigraphError::EmptyText)?;
        let vertex_count: usize = header.parse().map_err(|_| DigraphError::BadTextLine {
            line,
            expected: "a vertex count",
        })?;
        let mut digraph = Digraph::new(vertex_count)?;
        for (line, arc_line) in lines {
            let bad = DigraphError::BadTextLine {
                line,
                expected: "an arc as `tail head`",
            };
            let mut parts = arc_line.split_whitespace();
            let tail: usize = parts.next().ok_or(bad)?.parse().map_err(|_| bad)?;
            let head: usize = parts.next().ok_or(bad)?.parse().map_err(|_| bad)?;
            if parts.next().is_some() {
                return Err(bad);
            }
            digraph.add_arc(tail, head)?;
        }
        Ok(digraph)
    }
}

/// The Cayley digraph Cay(G, S): vertices are group elements in canonical
/// order, with an arc from x to y iff y * x^-1 is in S (equivalently
/// y = s * x for some s in S).
pub fn cayley(spec: &GroupSpec, s: &ConnectionSet) -> Result<Digraph, DigraphError> {
    let order = spec.order();
    let mut digraph = Digraph::new(order)?;
    for index in 0..order {
        let x = spec.element_at(index);
        for gen in s.iter() {
            let head = spec.index_of(spec.multiply(gen, x));
            digraph.add_arc(index, head)?;
        }
    }
    Ok(digraph)
}

fn bits(row: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(row.count_ones() as usize);
    let mut row = row;
    while row != 0 {
        out.push(row.trailing_zeros() as usize);
        row &= row - 1;
    }
    out
}
