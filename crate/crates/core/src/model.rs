//! Planted clique instances `G(n, k, 1/2)` and the subset primitives shared
//! by every other module.
//!
//! Adjacency is stored as packed `u64` rows, one row per vertex, so that the
//! number of edges between a vertex and a subset is a handful of popcounts.

use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::index;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::rng;

/// Binomial coefficient `C(m, 2)` as an integer.
#[inline]
pub fn pairs(m: u64) -> u64 {
    m * m.saturating_sub(1) / 2
}

/// `⌈γ·m⌉`, guarded against `γ·m` landing a rounding error above an
/// integer.
pub(crate) fn ceil_scaled(gamma: f64, m: u64) -> u64 {
    let x = gamma * m as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// Model dimensions: `n` vertices, planted clique of size `k`, candidate
/// subgraphs of size `kbar`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u64,
    pub k: u64,
    pub kbar: u64,
}

impl ModelParams {
    pub fn new(n: u64, k: u64, kbar: u64) -> Result<Self> {
        if k == 0 || k > kbar || kbar > n {
            return Err(param(format!("need 1 <= k <= kbar <= n, got n={n} k={k} kbar={kbar}")));
        }
        Ok(Self { n, k, kbar })
    }

    /// `⌊kbar·k/n⌋`, the expected overlap of a uniform subset rounded down.
    pub fn overlap_floor(&self) -> u64 {
        ((self.kbar as u128 * self.k as u128) / self.n as u128) as u64
    }

    /// Whether overlap `z` can be realised by some `kbar`-subset.
    pub fn feasible(&self, z: u64) -> bool {
        z <= self.k.min(self.kbar) && self.kbar - z <= self.n - self.k
    }
}

/// Simple undirected graph with a dense bit-matrix adjacency.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_total())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..u {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// `G(n, 1/2)`: every pair independently present with probability 1/2.
    ///
    /// Pairs are visited in the order `(1,0), (2,0), (2,1), (3,0), …` and each
    /// consumes one bit of the seeded stream, least significant bit first.
    pub fn erdos_renyi_half(n: usize, seed: u64) -> Self {
        let mut rng = rng::seeded(seed);
        Self::fill_half(n, &mut rng)
    }

    fn fill_half(n: usize, rng: &mut rng::Rng) -> Self {
        let mut g = Self::empty(n);
        let mut buf = 0u64;
        let mut left = 0u32;
        for u in 1..n {
            for v in 0..u {
                if left == 0 {
                    buf = rng.next_u64();
                    left = 64;
                }
                if buf & 1 == 1 {
                    g.add_edge(u, v);
                }
                buf >>= 1;
                left -= 1;
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of `u64` words per adjacency row.
    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u}, {v})");
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    pub fn degree(&self, u: usize) -> u32 {
        self.row(u).iter().map(|w| w.count_ones()).sum()
    }

    pub fn edge_total(&self) -> u64 {
        self.rows.iter().map(|w| w.count_ones() as u64).sum::<u64>() / 2
    }

    /// Bit mask over vertices with the given members set.
    pub fn mask_of(&self, members: &[usize]) -> Vec<u64> {
        let mut mask = vec![0u64; self.words];
        for &v in members {
            mask[v / 64] |= 1 << (v % 64);
        }
        mask
    }

    /// Number of neighbours of `u` inside `mask`.
    #[inline]
    pub fn degree_into(&self, u: usize, mask: &[u64]) -> u32 {
        self.row(u).iter().zip(mask).map(|(a, b)| (a & b).count_ones()).sum()
    }

    /// `|E[S]|` for a list of distinct vertices.
    pub fn edges_within(&self, members: &[usize]) -> u64 {
        let mask = self.mask_of(members);
        let twice: u64 = members.iter().map(|&v| self.degree_into(v, &mask) as u64).sum();
        twice / 2
    }
}

/// A set of vertices kept as a strictly increasing list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSubset {
    members: Vec<usize>,
}

impl VertexSubset {
    /// Canonicalises `members` (sorts) and checks range and distinctness.
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(param("subset has a repeated vertex"));
        }
        if let Some(&last) = members.last() {
            if last >= n {
                return Err(param(format!("vertex {last} out of range for n = {n}")));
            }
        }
        Ok(Self { members })
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Dash separated vertex list, e.g. `0-3-7`.
    pub fn to_dashed(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|v| v.to_string()).collect();
        parts.join("-")
    }
}

/// An `n`-vertex graph together with the vertices of its planted clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedGraph {
    graph: Graph,
    planted: VertexSubset,
    planted_mask: Vec<u64>,
    seed: u64,
}

impl PlantedGraph {
    /// Wraps an existing graph, checking that `planted` spans a clique.
    pub fn from_parts(graph: Graph, planted: VertexSubset, seed: u64) -> Result<Self> {
        let n = graph.n();
        if planted.size() == 0 {
            return Err(param("planted set must be nonempty"));
        }
        if planted.members().iter().any(|&v| v >= n) {
            return Err(param("planted vertex out of range"));
        }
        let p = planted.members();
        for (i, &u) in p.iter().enumerate() {
            for &v in &p[..i] {
                if !graph.has_edge(u, v) {
                    return Err(param(format!("planted pair ({v}, {u}) is not an edge")));
                }
            }
        }
        let planted_mask = graph.mask_of(p);
        Ok(Self {
            graph,
            planted,
            planted_mask,
            seed,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> usize {
        self.planted.size()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn planted(&self) -> &VertexSubset {
        &self.planted
    }

    pub fn planted_mask(&self) -> &[u64] {
        &self.planted_mask
    }

    #[inline]
    pub fn is_planted(&self, v: usize) -> bool {
        self.planted_mask[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn params(&self, kbar: usize) -> Result<ModelParams> {
        ModelParams::new(self.n() as u64, self.k() as u64, kbar as u64)
    }

    /// Vertices outside the planted clique, increasing.
    pub fn non_planted(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| !self.is_planted(v)).collect()
    }

    fn check(&self, s: &VertexSubset) -> Result<()> {
        match s.members().last() {
            Some(&v) if v >= self.n() => Err(param(format!("vertex {v} out of range for n = {}", self.n()))),
            _ => Ok(()),
        }
    }
}

/// Samples `G(n, k, 1/2)`.
///
/// The planted set is a uniform `k`-subset drawn first from the seeded
/// stream (partial Fisher–Yates), then every pair is drawn as in
/// [`Graph::erdos_renyi_half`] and pairs inside the planted set are forced
/// to be edges.
pub fn sample_planted(n: usize, k: usize, seed: u64) -> Result<PlantedGraph> {
    if n == 0 || k == 0 || k > n {
        return Err(param(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    let mut rng = rng::seeded(seed);
    let planted = index::sample(&mut rng, n, k).into_vec();
    let planted = VertexSubset::new(planted, n)?;
    let mut graph = Graph::fill_half(n, &mut rng);
    let p = planted.members();
    for (i, &u) in p.iter().enumerate() {
        for &v in &p[..i] {
            graph.add_edge(u, v);
        }
    }
    PlantedGraph::from_parts(graph, planted, seed)
}

/// `|E[S]|`, the number of edges with both endpoints in `s`.
pub fn edge_count(g: &PlantedGraph, s: &VertexSubset) -> Result<u64> {
    g.check(s)?;
    Ok(g.graph.edges_within(s.members()))
}

/// `|S ∩ planted|`.
pub fn overlap(g: &PlantedGraph, s: &VertexSubset) -> Result<usize> {
    g.check(s)?;
    Ok(s.members().iter().filter(|&&v| g.is_planted(v)).count())
}

// ---------------------------------------------------------------------------
// Graph file format
//
//   pcg v1 <n> <k> <seed>
//   <planted vertices, space separated, increasing>
//   <row 0>
//   ...
//   <row n-1>
//
// Row i is the integer sum_{j<i} adj(i,j)·2^j written in lowercase hex with
// exactly max(1, ceil(i/4)) digits, most significant digit first.
// ---------------------------------------------------------------------------

fn row_digits(i: usize) -> usize {
    i.div_ceil(4).max(1)
}

fn nibble(g: &Graph, i: usize, d: usize) -> u8 {
    let mut x = 0u8;
    for b in 0..4 {
        let j = 4 * d + b;
        if j < i && g.has_edge(i, j) {
            x |= 1 << b;
        }
    }
    x
}

/// Writes `g` in the `pcg v1` text format.
pub fn write_graph<W: Write>(g: &PlantedGraph, mut out: W) -> std::io::Result<()> {
    let n = g.n();
    writeln!(out, "pcg v1 {} {} {}", n, g.k(), g.seed())?;
    let planted: Vec<String> = g.planted().members().iter().map(|v| v.to_string()).collect();
    writeln!(out, "{}", planted.join(" "))?;
    let mut line = String::new();
    for i in 0..n {
        line.clear();
        for d in (0..row_digits(i)).rev() {
            let x = nibble(g.graph(), i, d);
            line.push(char::from_digit(x as u32, 16).unwrap());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn graph_to_string(g: &PlantedGraph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Parses the `pcg v1` text format. The parser is strict: every row must
/// have its canonical digit count and no bit at or above the diagonal.
pub fn read_graph<R: BufRead>(input: R) -> Result<PlantedGraph> {
    let bad = |line: usize, msg: &str| Error::GraphFormat {
        line,
        msg: msg.to_string(),
    };
    let mut lines = input.lines().enumerate().map(|(i, l)| {
        l.map(|s| (i + 1, s)).map_err(|e| Error::GraphFormat {
            line: i + 1,
            msg: e.to_string(),
        })
    });
    let (ln, header) = lines.next().ok_or_else(|| bad(1, "empty input"))??;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 5 || fields[0] != "pcg" || fields[1] != "v1" {
        return Err(bad(ln, "expected header `pcg v1 n k seed`"));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|_| bad(ln, "bad header number"));
    let n = num(fields[2])? as usize;
    let k = num(fields[3])? as usize;
    let seed = num(fields[4])?;

    let (ln, planted_line) = lines.next().ok_or_else(|| bad(2, "missing planted line"))??;
    let planted: Vec<usize> = if planted_line.is_empty() {
        Vec::new()
    } else {
        planted_line
            .split(' ')
            .map(|s| s.parse::<usize>().map_err(|_| bad(ln, "bad planted vertex")))
            .collect::<Result<_>>()?
    };
    if planted.len() != k || planted.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad(ln, "planted list must hold k increasing vertices"));
    }
    if planted.last().is_some_and(|&v| v >= n) {
        return Err(bad(ln, "planted vertex out of range"));
    }

    let mut graph = Graph::empty(n);
    for i in 0..n {
        let (ln, row) = lines.next().ok_or_else(|| bad(i + 3, "missing adjacency row"))??;
        if row.len() != row_digits(i) {
            return Err(bad(ln, "row has the wrong number of hex digits"));
        }
        for (pos, ch) in row.chars().enumerate() {
            if !matches!(ch, '0'..='9' | 'a'..='f') {
                return Err(bad(ln, "rows must be lowercase hex"));
            }
            let x = ch.to_digit(16).unwrap();
            let d = row.len() - 1 - pos;
            for b in 0..4 {
                if x >> b & 1 == 1 {
                    let j = 4 * d + b;
                    if j >= i {
                        return Err(bad(ln, "bit at or above the diagonal"));
                    }
                    graph.add_edge(i, j);
                }
            }
        }
    }
    if let Some(next) = lines.next() {
        let (ln, extra) = next?;
        if !extra.is_empty() || lines.next().is_some() {
            return Err(bad(ln, "trailing content"));
        }
    }
    let planted = VertexSubset::from_sorted_unchecked(planted);
    PlantedGraph::from_parts(graph, planted, seed).map_err(|e| bad(2, &e.to_string()))
}
