use std::collections::VecDeque;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use crate::graphs::{parse_graph6, Graph, GraphError};

use super::SearchError;

/// Largest order enumerated natively.
pub const MAX_ENUMERATION_ORDER: usize = 7;

pub const BOUNDARY_MIN_ORDER: usize = 11;
pub const BOUNDARY_MAX_ORDER: usize = 22;

/// A problem with one item of a source. Lenient scans skip these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemError {
    pub line: usize,
    pub error: GraphError,
}

impl fmt::Display for ItemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

pub type SourceItem = Result<Graph, ItemError>;

enum Cursor {
    All {
        n: usize,
        last_n: usize,
        next: u64,
    },
    Boundary {
        n: usize,
        last_n: usize,
        pending: VecDeque<Graph>,
    },
    Stream {
        lines: std::io::Lines<BufReader<File>>,
        line: usize,
    },
    List {
        graphs: std::vec::IntoIter<Graph>,
    },
}

/// A sequential stream of graphs with a fixed, reproducible order.
pub struct GraphSource {
    descriptor: String,
    cursor: Cursor,
}

impl fmt::Debug for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphSource")
            .field("descriptor", &self.descriptor)
            .finish_non_exhaustive()
    }
}

fn range_label(kind: &str, lo: usize, hi: usize) -> String {
    if lo == hi {
        format!("{kind}({lo})")
    } else {
        format!("{kind}({lo}..{hi})")
    }
}

/// Every labelled graph on `n` vertices, in edge-mask order.
pub fn enumerate_all_graphs(n: usize) -> Result<GraphSource, SearchError> {
    enumerate_all_graphs_range(n, n)
}

/// [`enumerate_all_graphs`] for each order in `lo..=hi`, smallest first.
pub fn enumerate_all_graphs_range(lo: usize, hi: usize) -> Result<GraphSource, SearchError> {
    if lo == 0 || lo > hi {
        return Err(SearchError::Range(format!(
            "invalid order range {lo}..{hi}"
        )));
    }
    if hi > MAX_ENUMERATION_ORDER {
        return Err(SearchError::Range(format!(
            "exhaustive enumeration stops at n = {MAX_ENUMERATION_ORDER} \
             (got {hi}); feed larger orders as a graph6 stream instead"
        )));
    }
    Ok(GraphSource {
        descriptor: range_label("all", lo, hi),
        cursor: Cursor::All {
            n: lo,
            last_n: hi,
            next: 0,
        },
    })
}

/// Graphs made of a clique on `n - 2` vertices plus two extra vertices.
///
/// Parameters: `v1` sees `a` clique vertices, `v2` sees `b <= a` of them,
/// `c` are shared, and `e` says whether `v1 v2` is an edge. The clique is
/// `0..n-2`; the shared block is `0..c`, `v1` also sees `c..a` and `v2`
/// also sees `a..a+b-c`.
pub fn boundary_family(n: usize) -> Result<GraphSource, SearchError> {
    boundary_family_range(n, n)
}

pub fn boundary_family_range(lo: usize, hi: usize) -> Result<GraphSource, SearchError> {
    if lo < BOUNDARY_MIN_ORDER || hi > BOUNDARY_MAX_ORDER || lo > hi {
        return Err(SearchError::Range(format!(
            "boundary family needs {BOUNDARY_MIN_ORDER} <= n <= {BOUNDARY_MAX_ORDER}, got {lo}..{hi}"
        )));
    }
    Ok(GraphSource {
        descriptor: range_label("boundary-family", lo, hi),
        cursor: Cursor::Boundary {
            n: lo,
            last_n: hi,
            pending: boundary_members(lo),
        },
    })
}

/// The member with parameters `(a, b, c, e)`; `None` if they are invalid.
pub fn boundary_member(n: usize, a: usize, b: usize, c: usize, e: bool) -> Option<Graph> {
    let m = n.checked_sub(2)?;
    if a > m || b > a || c > b || a + b > m + c {
        return None;
    }
    let (v1, v2) = (m, m + 1);
    let mut g = Graph::empty(n).ok()?;
    for u in 0..m {
        for v in u + 1..m {
            g.add_edge(u, v).ok()?;
        }
    }
    for u in 0..a {
        g.add_edge(v1, u).ok()?;
    }
    for u in (0..c).chain(a..a + b - c) {
        g.add_edge(v2, u).ok()?;
    }
    if e {
        g.add_edge(v1, v2).ok()?;
    }
    Some(g)
}

fn boundary_members(n: usize) -> VecDeque<Graph> {
    let m = n - 2;
    let mut out = VecDeque::new();
    for a in 0..=m {
        for b in 0..=a {
            for c in (a + b).saturating_sub(m)..=b {
                for e in [false, true] {
                    out.push_back(boundary_member(n, a, b, c, e).expect("valid parameters"));
                }
            }
        }
    }
    out
}

/// Graphs read from a file with one graph6 string per line.
///
/// Blank lines and a leading `>>graph6<<` marker are ignored. Parse errors
/// are yielded as items carrying their 1-based line number.
pub fn stream_graph6(path: impl AsRef<Path>) -> Result<GraphSource, SearchError> {
    let path: PathBuf = path.as_ref().to_path_buf();
    let file = File::open(&path).map_err(|e| SearchError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(GraphSource {
        descriptor: format!("graph6-stream({})", path.display()),
        cursor: Cursor::Stream {
            lines: BufReader::new(file).lines(),
            line: 0,
        },
    })
}

impl GraphSource {
    /// An explicit list, e.g. graphs given on the command line.
    pub fn from_graphs(descriptor: impl Into<String>, graphs: Vec<Graph>) -> Self {
        GraphSource {
            descriptor: descriptor.into(),
            cursor: Cursor::List {
                graphs: graphs.into_iter(),
            },
        }
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Pulls the next item. I/O failures are fatal and end the stream.
    pub fn next_item(&mut self) -> Result<Option<SourceItem>, SearchError> {
        match &mut self.cursor {
            Cursor::All { n, last_n, next } => loop {
                let pairs = *n * (*n - 1) / 2;
                if *next < 1u64 << pairs {
                    let g = Graph::from_edge_mask(*n, *next).expect("order checked");
                    *next += 1;
                    return Ok(Some(Ok(g)));
                }
                if *n == *last_n {
                    return Ok(None);
                }
                *n += 1;
                *next = 0;
            },
            Cursor::Boundary { n, last_n, pending } => loop {
                if let Some(g) = pending.pop_front() {
                    return Ok(Some(Ok(g)));
                }
                if *n == *last_n {
                    return Ok(None);
                }
                *n += 1;
                *pending = boundary_members(*n);
            },
            Cursor::Stream { lines, line } => loop {
                let Some(text) = lines.next() else {
                    return Ok(None);
                };
                *line += 1;
                let text = text.map_err(|e| SearchError::Io {
                    path: self.descriptor.clone(),
                    message: format!("line {line}: {e}"),
                })?;
                let mut t = text.trim();
                if *line == 1 {
                    t = t.strip_prefix(">>graph6<<").unwrap_or(t);
                }
                if t.is_empty() {
                    continue;
                }
                return Ok(Some(
                    parse_graph6(t).map_err(|error| ItemError { line: *line, error }),
                ));
            },
            Cursor::List { graphs } => Ok(graphs.next().map(Ok)),
        }
    }
}

impl Iterator for GraphSource {
    type Item = Result<SourceItem, SearchError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_item().transpose()
    }
}
