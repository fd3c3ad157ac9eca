//! Simple undirected graphs on at most 64 vertices, stored as neighbour bitsets.
//!
//! Vertices are dense 0-based indices. The graph6 codec follows the format
//! shipped with nauty: a header byte `63 + n`, then the upper-triangle
//! adjacency bits `x(0,1), x(0,2), x(1,2), x(0,3), ...` packed six per byte,
//! most significant bit first, zero padded, each byte offset by 63.

use std::fmt;

use thiserror::Error;

use crate::spectral::SeidelMatrix;

/// Largest order a [`Graph`] can hold.
pub const MAX_ORDER: usize = 64;

/// Largest order supported by the single-byte graph6 header.
pub const MAX_GRAPH6_ORDER: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph order {0} outside supported range 1..={max}", max = MAX_ORDER)]
    Order(usize),
    #[error("graph6 encoding supports 1..={max} vertices, got {0}", max = MAX_GRAPH6_ORDER)]
    Graph6Order(usize),
    #[error("vertex {vertex} out of range for graph of order {n}")]
    Vertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
}

fn parse_error(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Parse {
        offset,
        reason: reason.into(),
    }
}

#[inline]
const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Bitmask with the lowest `n` bits set.
#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        bit(n) - 1
    }
}

/// A simple undirected graph.
///
/// `rows[v]` is the neighbour set of `v`; rows at indices `>= n` are always
/// zero so derived equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: [u64; MAX_ORDER],
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_ORDER {
            return Err(GraphError::Order(n));
        }
        Ok(Graph {
            n,
            rows: [0; MAX_ORDER],
        })
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        let mask = low_mask(n);
        for v in 0..n {
            g.rows[v] = mask & !bit(v);
        }
        Ok(g)
    }

    /// The cycle `C_n` with edges `i ~ i+1 (mod n)`. Needs `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::Order(n));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from neighbour bitsets, validating symmetry and loops.
    pub fn from_rows(rows: &[u64]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        let mask = low_mask(n);
        for (v, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                let stray = (row & !mask).trailing_zeros() as usize;
                return Err(GraphError::Vertex { vertex: stray, n });
            }
            if row & bit(v) != 0 {
                return Err(GraphError::Loop(v));
            }
            g.rows[v] = row;
        }
        for u in 0..n {
            for v in 0..n {
                if g.has_edge(u, v) != g.has_edge(v, u) {
                    return Err(parse_error(0, format!("asymmetric adjacency at ({u},{v})")));
                }
            }
        }
        Ok(g)
    }

    /// Builds the graph whose upper-triangle pairs (in graph6 order) are set
    /// according to the bits of `mask`.
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if idx < 64 && mask >> idx & 1 == 1 {
                    g.rows[i] |= bit(j);
                    g.rows[j] |= bit(i);
                }
                idx += 1;
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// All vertex indices as a bitmask.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u] & bit(v) != 0
    }

    /// Open neighbourhood of `v` as a bitmask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.rows[v]
    }

    /// Closed neighbourhood `N[v]` as a bitmask.
    #[inline]
    pub fn closed_neighbors(&self, v: usize) -> u64 {
        self.rows[v] | bit(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows[..self.n]
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows[..self.n]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.rows[u] |= bit(v);
        self.rows[v] |= bit(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.rows[u] &= !bit(v);
        self.rows[v] &= !bit(u);
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::Vertex {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Flips adjacency on every pair `{u, v}` with `u != v` where exactly one
    /// endpoint lies in `set`. This is Seidel switching on raw bitmasks.
    pub(crate) fn flip_across(&mut self, set: u64) {
        let all = self.vertex_mask();
        let set = set & all;
        for v in 0..self.n {
            let other_side = if set & bit(v) != 0 { all & !set } else { set };
            self.rows[v] ^= other_side & !bit(v);
        }
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut out = Graph {
            n: self.n,
            rows: [0; MAX_ORDER],
        };
        for u in 0..self.n {
            let mut row = self.rows[u];
            while row != 0 {
                let v = row.trailing_zeros() as usize;
                row &= row - 1;
                out.rows[perm[u]] |= bit(perm[v]);
            }
        }
        out
    }

    /// Subgraph induced by the vertices in `keep`, relabelled in increasing order.
    pub fn induced(&self, keep: u64) -> Result<Graph, GraphError> {
        let verts: Vec<usize> = (0..self.n).filter(|&v| keep & bit(v) != 0).collect();
        let mut out = Graph::empty(verts.len())?;
        for (a, &u) in verts.iter().enumerate() {
            for (b, &v) in verts.iter().enumerate() {
                if self.has_edge(u, v) {
                    out.rows[a] |= bit(b);
                }
            }
        }
        Ok(out)
    }

    pub fn is_complete(&self) -> bool {
        let all = self.vertex_mask();
        (0..self.n).all(|v| self.rows[v] == all & !bit(v))
    }

    pub fn is_edgeless(&self) -> bool {
        self.rows[..self.n].iter().all(|&r| r == 0)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match encode_graph6(self) {
            Ok(s) => write!(f, "Graph({s})"),
            Err(_) => write!(f, "Graph(n={}, m={})", self.n, self.edge_count()),
        }
    }
}

/// Complement `Ḡ`: every off-diagonal pair is flipped.
pub fn complement(g: &Graph) -> Graph {
    let all = g.vertex_mask();
    let mut out = g.clone();
    for v in 0..g.n {
        out.rows[v] = !g.rows[v] & all & !bit(v);
    }
    out
}

/// Seidel matrix: zero diagonal, `-1` on edges, `+1` on non-edges.
pub fn seidel_matrix(g: &Graph) -> SeidelMatrix {
    let n = g.n;
    let mut entries = vec![0i8; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                entries[i * n + j] = if g.has_edge(i, j) { -1 } else { 1 };
            }
        }
    }
    SeidelMatrix::from_entries_unchecked(n, entries)
}

pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let bytes = text.as_bytes();
    let Some(&head) = bytes.first() else {
        return Err(parse_error(0, "empty input"));
    };
    if !(63..=126).contains(&head) {
        return Err(parse_error(
            0,
            format!("header byte {head} outside [63,126]"),
        ));
    }
    if head == 126 {
        return Err(parse_error(0, "multi-byte order header is not supported"));
    }
    let n = (head - 63) as usize;
    if n == 0 {
        return Err(parse_error(0, "graph of order 0"));
    }
    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    let body = &bytes[1..];
    if body.len() != nbytes {
        return Err(parse_error(
            1 + body.len().min(nbytes),
            format!(
                "expected {} edge bytes for n={n}, found {}",
                nbytes,
                body.len()
            ),
        ));
    }
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_error(i + 1, format!("byte {b} outside [63,126]")));
        }
    }
    let mut g = Graph::empty(n)?;
    let mut idx = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = body[idx / 6] - 63;
            if byte >> (5 - idx % 6) & 1 == 1 {
                g.rows[i] |= bit(j);
                g.rows[j] |= bit(i);
            }
            idx += 1;
        }
    }
    if !nbits.is_multiple_of(6) {
        let last = body[nbytes - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(parse_error(nbytes, "nonzero padding bits"));
        }
    }
    Ok(g)
}

pub fn encode_graph6(g: &Graph) -> Result<String, GraphError> {
    let n = g.n;
    if n == 0 || n > MAX_GRAPH6_ORDER {
        return Err(GraphError::Graph6Order(n));
    }
    let nbits = n * (n - 1) / 2;
    let mut out = Vec::with_capacity(1 + nbits.div_ceil(6));
    out.push(63 + n as u8);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    // every byte is in 63..=126, hence ASCII
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
        fn permute(k: usize, perm: &mut Vec<usize>, a: &Graph, b: &Graph) -> bool {
            if k == perm.len() {
                return a.relabel(perm) == *b;
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                if permute(k + 1, perm, a, b) {
                    return true;
                }
                perm.swap(k, i);
            }
            false
        }
        a.order() == b.order()
            && a.edge_count() == b.edge_count()
            && permute(0, &mut (0..a.order()).collect(), a, b)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_graph6("Bw").unwrap(), Graph::complete(3).unwrap());
        assert_eq!(parse_graph6("Bg").unwrap(), Graph::path(3).unwrap());
        assert_eq!(parse_graph6("@").unwrap(), Graph::complete(1).unwrap());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_graph6(&Graph::complete(3).unwrap()).unwrap(), "Bw");
        assert_eq!(encode_graph6(&Graph::empty(3).unwrap()).unwrap(), "B?");
        assert_eq!(encode_graph6(&Graph::complete(1).unwrap()).unwrap(), "@");
        // C5 packed by hand:
        // x01 x02 x12 x03 x13 x23 | x04 x14 x24 x34 pad pad
        //  1   0   1   0   0   1  |  1   0   0   1   0   0
        // 41 + 63 = 'h', 36 + 63 = 'c'
        assert_eq!(encode_graph6(&Graph::cycle(5).unwrap()).unwrap(), "Dhc");
    }

    #[test]
    fn parse_errors_name_offsets() {
        match parse_graph6("") {
            Err(GraphError::Parse { offset: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
        // too short
        match parse_graph6("D") {
            Err(GraphError::Parse { offset: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        // too long
        assert!(matches!(parse_graph6("Bww"), Err(GraphError::Parse { .. })));
        // byte out of range
        match parse_graph6("B ") {
            Err(GraphError::Parse { offset: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        // n=3 has 3 bits, the low 3 bits of the byte are padding
        match parse_graph6("Bx") {
            Err(GraphError::Parse { offset: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_graph6("~?@?"),
            Err(GraphError::Parse { offset: 0, .. })
        ));
        assert!(matches!(
            parse_graph6("?"),
            Err(GraphError::Parse { offset: 0, .. })
        ));
    }

    #[test]
    fn encode_rejects_large_orders() {
        let g = Graph::empty(63).unwrap();
        assert_eq!(encode_graph6(&g), Err(GraphError::Graph6Order(63)));
        assert!(encode_graph6(&Graph::empty(62).unwrap()).is_ok());
    }

    #[test]
    fn complement_examples() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(complement(&k3), Graph::empty(3).unwrap());
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(complement(&complement(&c5)), c5);
        let cc5 = complement(&c5);
        assert_eq!(cc5.edge_count(), 5);
        assert_ne!(cc5, c5);
        assert!(brute_isomorphic(&cc5, &c5));
        assert!(!brute_isomorphic(&Graph::path(5).unwrap(), &c5));
    }

    #[test]
    fn seidel_matrix_examples() {
        let s = seidel_matrix(&Graph::complete(2).unwrap());
        assert_eq!(s.entries(), &[0, -1, -1, 0]);
        let s = seidel_matrix(&Graph::empty(2).unwrap());
        assert_eq!(s.entries(), &[0, 1, 1, 0]);
        let s = seidel_matrix(&Graph::path(3).unwrap());
        assert_eq!(s.entries(), &[0, -1, 1, -1, 0, -1, 1, -1, 0]);
    }

    #[test]
    fn edge_mask_uses_graph6_order() {
        // bit 2 is the pair (1,2)
        let g = Graph::from_edge_mask(3, 0b100).unwrap();
        assert!(g.has_edge(1, 2));
        assert_eq!(g.edge_count(), 1);
        let g = Graph::from_edge_mask(4, 0b11_1111).unwrap();
        assert!(g.is_complete());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Graph::empty(0), Err(GraphError::Order(0)));
        assert_eq!(Graph::empty(65), Err(GraphError::Order(65)));
        let mut g = Graph::empty(3).unwrap();
        assert_eq!(g.add_edge(1, 1), Err(GraphError::Loop(1)));
        assert_eq!(
            g.add_edge(0, 3),
            Err(GraphError::Vertex { vertex: 3, n: 3 })
        );
        assert!(Graph::from_rows(&[0b10, 0b00]).is_err());
        assert!(Graph::from_rows(&[0b01]).is_err());
        assert_eq!(
            Graph::from_rows(&[0b10, 0b01]).unwrap(),
            Graph::complete(2).unwrap()
        );
    }

    #[test]
    fn induced_subgraph() {
        let c5 = Graph::cycle(5).unwrap();
        let p = c5.induced(0b01111).unwrap();
        assert_eq!(p, Graph::path(4).unwrap());
    }
}
