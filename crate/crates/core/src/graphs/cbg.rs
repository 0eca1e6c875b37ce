//! Colored Büchi graphs: finite graphs whose vertices carry a subset of the
//! two color propositions and two acceptance sets.

use std::collections::BTreeSet;
use std::fmt;

/// Vertices are dense indices into the graph's tables.
pub type Vertex = usize;

/// The subset of `{r, r'}` attached to a vertex or read as a letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Colors {
    pub r: bool,
    pub r_prime: bool,
}

impl Colors {
    pub fn new(r: bool, r_prime: bool) -> Self {
        Colors { r, r_prime }
    }

    /// All four color subsets in a fixed order.
    pub fn all() -> [Colors; 4] {
        [
            Colors::new(false, false),
            Colors::new(false, true),
            Colors::new(true, false),
            Colors::new(true, true),
        ]
    }

    /// Agreement on the `r` component.
    pub fn same_r(self, other: Colors) -> bool {
        self.r == other.r
    }

    /// Agreement on the `r'` component.
    pub fn same_r_prime(self, other: Colors) -> bool {
        self.r_prime == other.r_prime
    }
}

impl fmt::Display for Colors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.r, self.r_prime) {
            (false, false) => write!(f, "{{}}"),
            (true, false) => write!(f, "{{r}}"),
            (false, true) => write!(f, "{{r'}}"),
            (true, true) => write!(f, "{{r,r'}}"),
        }
    }
}

/// Errors raised while reading or assembling graphs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} is out of range")]
    UnknownVertex(Vertex),
    #[error("the graph has no vertices")]
    Empty,
    #[error("no initial vertex was declared")]
    NoInitial,
    #[error("the lasso is not a path of the graph")]
    NotAPath,
}

/// A finite graph with an initial vertex, a color label per vertex, and two
/// acceptance sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredBuchiGraph {
    labels: Vec<Colors>,
    edges: Vec<Vec<Vertex>>,
    initial: Vertex,
    acc1: BTreeSet<Vertex>,
    acc2: BTreeSet<Vertex>,
}

impl ColoredBuchiGraph {
    pub fn new(
        labels: Vec<Colors>,
        edge_list: &[(Vertex, Vertex)],
        initial: Vertex,
        acc1: BTreeSet<Vertex>,
        acc2: BTreeSet<Vertex>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if initial >= n {
            return Err(GraphError::UnknownVertex(initial));
        }
        for &v in acc1.iter().chain(acc2.iter()) {
            if v >= n {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let mut edges = vec![BTreeSet::new(); n];
        for &(src, dst) in edge_list {
            if src >= n {
                return Err(GraphError::UnknownVertex(src));
            }
            if dst >= n {
                return Err(GraphError::UnknownVertex(dst));
            }
            edges[src].insert(dst);
        }
        let edges = edges.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(ColoredBuchiGraph { labels, edges, initial, acc1, acc2 })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: Vertex) -> Colors {
        self.labels[v]
    }

    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.edges[v]
    }

    pub fn initial(&self) -> Vertex {
        self.initial
    }

    pub fn acc1(&self) -> &BTreeSet<Vertex> {
        &self.acc1
    }

    pub fn acc2(&self) -> &BTreeSet<Vertex> {
        &self.acc2
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Reads the line-oriented text format:
    ///
    /// ```text
    /// vertex 0 {r}
    /// vertex 1 {}
    /// edge 0 1
    /// edge 1 0
    /// init 0
    /// acc1 0
    /// acc2 1
    /// ```
    ///
    /// `#` starts a comment. Vertex ids must be declared before use and form
    /// the dense range `0..n`.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut labels: Vec<Colors> = Vec::new();
        let mut edge_list: Vec<(Vertex, Vertex)> = Vec::new();
        let mut initial: Option<Vertex> = None;
        let mut acc1 = BTreeSet::new();
        let mut acc2 = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: &str| GraphError::Parse { line, msg: msg.to_string() };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut words = content.split_whitespace();
            let keyword = words.next().unwrap();
            let rest: Vec<&str> = words.collect();
            match keyword {
                "vertex" => {
                    if rest.len() != 2 {
                        return Err(err("expected `vertex <id> <colors>`"));
                    }
                    let id = parse_id(rest[0], line)?;
                    if id != labels.len() {
                        return Err(err(&format!("vertex ids must be declared in order, expected {}", labels.len())));
                    }
                    labels.push(parse_colors(rest[1], line)?);
                }
                "edge" => {
                    if rest.len() != 2 {
                        return Err(err("expected `edge <src> <dst>`"));
                    }
                    edge_list.push((parse_id(rest[0], line)?, parse_id(rest[1], line)?));
                }
                "init" => {
                    if rest.len() != 1 {
                        return Err(err("expected `init <id>`"));
                    }
                    if initial.is_some() {
                        return Err(err("duplicate init declaration"));
                    }
                    initial = Some(parse_id(rest[0], line)?);
                }
                "acc1" | "acc2" => {
                    let target = if keyword == "acc1" { &mut acc1 } else { &mut acc2 };
                    for word in &rest {
                        target.insert(parse_id(word, line)?);
                    }
                }
                other => return Err(err(&format!("unknown keyword `{other}`"))),
            }
        }
        let initial = initial.ok_or(GraphError::NoInitial)?;
        ColoredBuchiGraph::new(labels, &edge_list, initial, acc1, acc2)
    }

    /// Writes the graph in the format accepted by [`ColoredBuchiGraph::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, colors) in self.labels.iter().enumerate() {
            out.push_str(&format!("vertex {v} {colors}\n"));
        }
        for (src, dsts) in self.edges.iter().enumerate() {
            for dst in dsts {
                out.push_str(&format!("edge {src} {dst}\n"));
            }
        }
        out.push_str(&format!("init {}\n", self.initial));
        for (name, set) in [("acc1", &self.acc1), ("acc2", &self.acc2)] {
            if !set.is_empty() {
                out.push_str(name);
                for v in set {
                    out.push_str(&format!(" {v}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

fn parse_id(word: &str, line: usize) -> Result<Vertex, GraphError> {
    word.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("expected a vertex id, found `{word}`"),
    })
}

fn parse_colors(word: &str, line: usize) -> Result<Colors, GraphError> {
    let err = || GraphError::Parse { line, msg: format!("expected a color set, found `{word}`") };
    let inner = word.strip_prefix('{').and_then(|w| w.strip_suffix('}')).ok_or_else(err)?;
    let mut colors = Colors::default();
    if inner.is_empty() {
        return Ok(colors);
    }
    for part in inner.split(',') {
        match part.trim() {
            "r" if !colors.r => colors.r = true,
            "r'" if !colors.r_prime => colors.r_prime = true,
            _ => return Err(err()),
        }
    }
    Ok(colors)
}

/// An ultimately periodic path: `stem` leads from the initial vertex to the
/// cycle, which repeats forever. The stem may be empty, in which case the
/// cycle starts at the initial vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<Vertex>,
    pub cycle: Vec<Vertex>,
}

impl Lasso {
    /// The vertex at position `n` of the infinite path.
    pub fn vertex_at(&self, n: usize) -> Vertex {
        if n < self.stem.len() {
            self.stem[n]
        } else {
            self.cycle[(n - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Checks that the lasso is a real path of `g`: the stem starts at the
    /// initial vertex, consecutive vertices are connected, and the cycle
    /// closes back on itself.
    pub fn is_path_of(&self, g: &ColoredBuchiGraph) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let first = *self.stem.first().unwrap_or(&self.cycle[0]);
        if first != g.initial() {
            return false;
        }
        let len = self.stem.len() + self.cycle.len();
        (0..len).all(|n| {
            let next = if n + 1 < len { self.vertex_at(n + 1) } else { self.cycle[0] };
            let v = self.vertex_at(n);
            v < g.vertex_count() && g.successors(v).contains(&next)
        })
    }

    /// Rotates the cycle so it starts at index `rot`, extending the stem by
    /// the skipped prefix. The infinite path is unchanged.
    pub fn rotate_cycle(&self, rot: usize) -> Lasso {
        let rot = rot % self.cycle.len();
        let mut stem = self.stem.clone();
        stem.extend_from_slice(&self.cycle[..rot]);
        let mut cycle = self.cycle[rot..].to_vec();
        cycle.extend_from_slice(&self.cycle[..rot]);
        Lasso { stem, cycle }
    }
}
