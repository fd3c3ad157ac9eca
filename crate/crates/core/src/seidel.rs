//! Seidel switching, SC-equivalence with the complete graph, odd pairs and
//! exact switching-class keys for small graphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{complement, encode_graph6, Graph};

/// Largest order accepted by [`switching_class_key`].
pub const MAX_KEY_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeidelError {
    #[error("exact switching-class keys need n <= {max}, got {0}", max = MAX_KEY_ORDER)]
    KeyOrder(usize),
    #[error("vertex {vertex} out of range for graph of order {n}")]
    Vertex { vertex: usize, n: usize },
}

/// One side `V₁` of a switching partition, as a vertex bitmask.
///
/// Switching on `V₁` and on its complement give the same graph, so the empty
/// and the full set are both the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SwitchingSet(u64);

impl SwitchingSet {
    pub fn from_mask(mask: u64) -> Self {
        SwitchingSet(mask)
    }

    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self, SeidelError> {
        let mut mask = 0u64;
        for &v in vertices {
            if v >= n {
                return Err(SeidelError::Vertex { vertex: v, n });
            }
            mask |= 1 << v;
        }
        Ok(SwitchingSet(mask))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn vertices(self) -> Vec<usize> {
        (0..64).filter(|&v| self.contains(v)).collect()
    }
}

/// Number of ordered odd pairs `(X, Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OddPairCount(pub u64);

impl OddPairCount {
    pub fn get(self) -> u64 {
        self.0
    }

    /// `n(n-1)(n-2)(n-3)/4`: three splits per 4-set, at most two of them odd,
    /// each counted in both orders.
    pub fn upper_bound(n: usize) -> u64 {
        if n < 4 {
            return 0;
        }
        let n = n as u64;
        n * (n - 1) * (n - 2) * (n - 3) / 4
    }
}

/// Seidel switching: flips adjacency across the cut `(w, V \ w)`.
pub fn switch(g: &Graph, w: SwitchingSet) -> Graph {
    let mut out = g.clone();
    out.flip_across(w.mask());
    out
}

/// How to carry a graph onto `K_n`: switch on `set`, then complement if asked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteWitness {
    pub set: SwitchingSet,
    pub complement: bool,
}

impl CompleteWitness {
    pub fn apply(&self, g: &Graph) -> Graph {
        let s = switch(g, self.set);
        if self.complement {
            complement(&s)
        } else {
            s
        }
    }
}

/// Makes `pivot` universal by switching on its closed neighbourhood.
fn normalize_universal(g: &Graph, pivot: usize) -> (Graph, SwitchingSet) {
    let set = SwitchingSet(g.closed_neighbors(pivot));
    (switch(g, set), set)
}

/// Decides SC-equivalence with `K_n`, returning a witness when it holds.
///
/// After switching vertex 0 to be universal, the graph is SC-equivalent to
/// `K_n` exactly when the other `n - 1` vertices induce a complete or an
/// edgeless graph.
pub fn is_sc_equivalent_to_complete(g: &Graph) -> Option<CompleteWitness> {
    let n = g.order();
    let (h, set) = normalize_universal(g, 0);
    let rest = h.vertex_mask() & !1;
    let rest_rows = (1..n).map(|v| h.neighbors(v) & rest);
    let all_complete = rest_rows
        .clone()
        .enumerate()
        .all(|(i, r)| r == rest & !(1u64 << (i + 1)));
    if all_complete {
        return Some(CompleteWitness {
            set,
            complement: false,
        });
    }
    if rest_rows.clone().all(|r| r == 0) {
        // h is a star; switching off vertex 0 empties it
        return Some(CompleteWitness {
            set: SwitchingSet(set.mask() ^ 1),
            complement: true,
        });
    }
    None
}

/// Counts ordered pairs `(X, Y)` of disjoint 2-sets with an odd number of
/// edges between them.
///
/// For `X = {a, b}`, `rows[a] ^ rows[b]` holds the parity of the edges from
/// each vertex to `X`; the cross count with `Y = {c, d}` is odd iff that row
/// differs at `c` and `d`.
pub fn count_odd_pairs(g: &Graph) -> OddPairCount {
    let n = g.order();
    if n < 4 {
        return OddPairCount(0);
    }
    let mut count = 0u64;
    for a in 0..n {
        for b in (a + 1)..n {
            let parity = g.neighbors(a) ^ g.neighbors(b);
            let others = g.vertex_mask() & !(1u64 << a) & !(1u64 << b);
            let odd = (parity & others).count_ones() as u64;
            let even = (others.count_ones() as u64) - odd;
            // unordered {c, d} ⊆ others with differing parity bits
            count += odd * even;
        }
    }
    OddPairCount(count)
}

/// Canonical byte string of the SC-class of `g` (graphs up to 8 vertices).
///
/// The minimum graph6 string over every pivot vertex, both `g` and its
/// complement, and every labelling that puts the pivot first, after
/// switching the pivot to be universal.
pub fn switching_class_key(g: &Graph) -> Result<Vec<u8>, SeidelError> {
    let n = g.order();
    if n > MAX_KEY_ORDER {
        return Err(SeidelError::KeyOrder(n));
    }
    let mut best: Option<Vec<u8>> = None;
    let comp = complement(g);
    for base in [g, &comp] {
        for pivot in 0..n {
            let (h, _) = normalize_universal(base, pivot);
            // perm[v] = new label of v; pivot goes to 0
            let others: Vec<usize> = (0..n).filter(|&v| v != pivot).collect();
            let mut order = others.clone();
            let mut perm = vec![0usize; n];
            for_each_permutation(&mut order, &mut |ord| {
                perm[pivot] = 0;
                for (i, &v) in ord.iter().enumerate() {
                    perm[v] = i + 1;
                }
                let key = encode_graph6(&h.relabel(&perm))
                    .expect("n <= 8 is within graph6 range")
                    .into_bytes();
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            });
        }
    }
    Ok(best.expect("at least one labelling"))
}

/// Heap's algorithm.
fn for_each_permutation(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let k = items.len();
    let mut c = vec![0usize; k];
    f(items);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
