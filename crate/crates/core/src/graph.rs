//! Configuration-model multigraphs, the Poissonized surrogate, the blue
//! marking coupling and adjacency matrices.
//!
//! Adjacency convention: a loop contributes 2 to the diagonal of the
//! multigraph adjacency so that row sums are degrees. The single-adjacency
//! matrix clamps every entry, diagonal included, to at most one.

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::degree::DegreeSequence;
use crate::error::{Error, Result};

/// Undirected multigraph on vertices `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: BTreeMap<(usize, usize), u32>,
    loops: BTreeMap<usize, u32>,
}

impl Multigraph {
    pub fn empty(n: usize) -> Self {
        Self { n, ..Default::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `count` parallel copies of `{i, j}` (a loop when `i == j`).
    pub fn add_edge(&mut self, i: usize, j: usize, count: u32) {
        assert!(i < self.n && j < self.n, "vertex out of range");
        if count == 0 {
            return;
        }
        if i == j {
            *self.loops.entry(i).or_default() += count;
        } else {
            *self.edges.entry((i.min(j), i.max(j))).or_default() += count;
        }
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        if i == j {
            self.loops(i)
        } else {
            self.edges.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
        }
    }

    pub fn loops(&self, i: usize) -> u32 {
        self.loops.get(&i).copied().unwrap_or(0)
    }

    /// Non-loop edges `(i, j, mult)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(i, j), &m)| (i, j, m))
    }

    /// `(i, loops)` for vertices carrying loops.
    pub fn loop_counts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.loops.iter().map(|(&i, &m)| (i, m))
    }

    /// Number of edges counted with multiplicity (loops count once).
    pub fn edge_count(&self) -> u64 {
        self.edges.values().chain(self.loops.values()).map(|&m| u64::from(m)).sum()
    }

    /// `deg(i) = sum_j mult(i, j) + 2 loops(i)`.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for (&(i, j), &m) in &self.edges {
            deg[i] += m;
            deg[j] += m;
        }
        for (&i, &m) in &self.loops {
            deg[i] += 2 * m;
        }
        deg
    }

    /// Writes `i j mult` per edge, then `i i loops` per looped vertex.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (i, j, m) in self.edges() {
            writeln!(w, "{i} {j} {m}")?;
        }
        for (i, m) in self.loop_counts() {
            writeln!(w, "{i} {i} {m}")?;
        }
        Ok(())
    }

    /// Inverse of [`write_edge_list`](Self::write_edge_list); `#` lines are skipped.
    pub fn read_edge_list<R: BufRead>(n: usize, r: R) -> Result<Self> {
        let mut g = Self::empty(n);
        for line in r.lines() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = t.split_whitespace().collect();
            let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
            if f.len() != 3 {
                return Err(Error::Parse(format!("expected `i j mult`, got {t:?}")));
            }
            let (i, j, m) = (parse(f[0])?, parse(f[1])?, parse(f[2])?);
            if i >= n || j >= n {
                return Err(Error::Parse(format!("vertex out of range in {t:?}")));
            }
            g.add_edge(i, j, m as u32);
        }
        Ok(g)
    }
}

/// One pairing per consecutive half-edge pair.
fn graph_from_pairs(n: usize, stubs: &[usize]) -> Multigraph {
    let mut g = Multigraph::empty(n);
    for pair in stubs.chunks_exact(2) {
        g.add_edge(pair[0], pair[1], 1);
    }
    g
}

/// Uniform perfect matching of all half-edges: Fisher–Yates shuffle of the
/// half-edge array, then consecutive entries are paired.
pub fn sample_configuration(seq: &DegreeSequence, seed: u64) -> Multigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = seq
        .degrees()
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat_n(i, d as usize))
        .collect();
    stubs.shuffle(&mut rng);
    graph_from_pairs(seq.n(), &stubs)
}

/// Independent Poisson multiplicities with rate
/// `lambda_ij = omega d_i d_j / n = D_i D_j / (n omega)` for `i != j` and
/// `Poisson(lambda_ii / 2)` loops. The rate depends on `i, j` only through
/// their degree classes.
pub fn sample_poissonized(seq: &DegreeSequence, seed: u64) -> Multigraph {
    let n = seq.n();
    let mut g = Multigraph::empty(n);
    if seq.total() == 0 {
        return g;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (n as f64 * seq.omega());
    let deg = seq.degrees();
    let draw = |lambda: f64, rng: &mut ChaCha8Rng| -> u32 {
        if lambda > 0.0 {
            Poisson::new(lambda).expect("finite positive rate").sample(rng) as u32
        } else {
            0
        }
    };
    for i in 0..n {
        let di = f64::from(deg[i]);
        g.add_edge(i, i, draw(0.5 * di * di * scale, &mut rng));
        for j in (i + 1)..n {
            g.add_edge(i, j, draw(di * f64::from(deg[j]) * scale, &mut rng));
        }
    }
    g
}

/// Grows `g` to a configuration sample with degrees `new_degrees` while
/// keeping the old matching as the marked (blue) part.
///
/// New half-edges are added two at a time to a uniform matching: the first
/// one picks a uniform partner among the currently matched half-edges and
/// the second, or the second itself; when an existing pair `{x, y}` is hit it
/// becomes `{p, x}` and `{q, y}`. Each insertion maps a uniform matching on
/// `2m` half-edges to a uniform matching on `2m + 2`, so the output has the
/// configuration-model law for `new_degrees` whenever `g` has it for its own
/// degrees.
pub fn blue_marking_extend(g: &Multigraph, new_degrees: &DegreeSequence, seed: u64) -> Result<Multigraph> {
    let n = g.n();
    if new_degrees.n() != n {
        return Err(Error::InvalidDegrees(format!(
            "expected {n} degrees, got {}",
            new_degrees.n()
        )));
    }
    let old = g.degrees();
    if let Some(i) = (0..n).find(|&i| new_degrees.degrees()[i] < old[i]) {
        return Err(Error::InvalidDegrees(format!(
            "vertex {i}: new degree {} below current degree {}",
            new_degrees.degrees()[i],
            old[i]
        )));
    }

    // half-edge ids: vertex i owns ids offset[i] .. offset[i] + new_degrees[i],
    // the first old[i] of which are matched by g.
    let mut owner = Vec::with_capacity(new_degrees.total() as usize);
    let mut next_free = Vec::with_capacity(n);
    let mut fresh = Vec::new();
    for (i, &d) in new_degrees.degrees().iter().enumerate() {
        next_free.push(owner.len());
        for k in 0..d {
            if k >= old[i] {
                fresh.push(owner.len());
            }
            owner.push(i);
        }
    }
    let mut partner = vec![usize::MAX; owner.len()];
    let mut matched: Vec<usize> = Vec::with_capacity(owner.len());
    let mut take = |i: usize| {
        let h = next_free[i];
        next_free[i] += 1;
        h
    };
    for (i, j, m) in g.edges() {
        for _ in 0..m {
            let (a, b) = (take(i), take(j));
            partner[a] = b;
            partner[b] = a;
            matched.extend([a, b]);
        }
    }
    for (i, m) in g.loop_counts() {
        for _ in 0..m {
            let (a, b) = (take(i), take(i));
            partner[a] = b;
            partner[b] = a;
            matched.extend([a, b]);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for pair in fresh.chunks_exact(2) {
        let (p, q) = (pair[0], pair[1]);
        let r = rng.random_range(0..=matched.len());
        if r == matched.len() {
            partner[p] = q;
            partner[q] = p;
        } else {
            let x = matched[r];
            let y = partner[x];
            partner[p] = x;
            partner[x] = p;
            partner[q] = y;
            partner[y] = q;
        }
        matched.extend([p, q]);
    }

    let mut out = Multigraph::empty(n);
    for (h, &p) in partner.iter().enumerate() {
        debug_assert_ne!(p, usize::MAX);
        if h < p {
            out.add_edge(owner[h], owner[p], 1);
        }
    }
    Ok(out)
}

/// Dense symmetric matrix, lower triangle stored row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    lower: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, lower: vec![0.0; n * (n + 1) / 2] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(i: usize, j: usize) -> usize {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        r * (r + 1) / 2 + c
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[Self::idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.lower[Self::idx(i, j)] = v;
    }

    /// Packed lower triangle, row-major.
    pub fn lower_triangle(&self) -> &[f64] {
        &self.lower
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, mut f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `trace(M^2)`, i.e. the squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..i {
                s += 2.0 * self.get(i, j).powi(2);
            }
            s += self.get(i, i).powi(2);
        }
        s
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.lower {
            *v *= c;
        }
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }

    /// Binary layout: `n` as little-endian u64, then the row-major lower
    /// triangle as little-endian f64.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        for v in &self.lower {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        let n = u64::from_le_bytes(b) as usize;
        let len = n
            .checked_mul(n + 1)
            .map(|x| x / 2)
            .ok_or_else(|| Error::Parse(format!("matrix order {n} too large")))?;
        let mut lower = Vec::with_capacity(len);
        for _ in 0..len {
            r.read_exact(&mut b)?;
            lower.push(f64::from_le_bytes(b));
        }
        Ok(Self { n, lower })
    }
}

/// `min(mult(i, j), 1)` off the diagonal, `min(2 loops(i), 1)` on it.
pub fn single_adjacency(g: &Multigraph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.n());
    for (i, j, _) in g.edges() {
        m.set(i, j, 1.0);
    }
    for (i, _) in g.loop_counts() {
        m.set(i, i, 1.0);
    }
    m
}

/// Multigraph adjacency: multiplicities off the diagonal, `2 loops(i)` on it.
pub fn multigraph_adjacency(g: &Multigraph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.n());
    for (i, j, mult) in g.edges() {
        m.set(i, j, f64::from(mult));
    }
    for (i, l) in g.loop_counts() {
        m.set(i, i, 2.0 * f64::from(l));
    }
    m
}

/// `omega^{-1/2}` times the single- or multigraph adjacency.
pub fn scaled_adjacency(g: &Multigraph, omega: f64, single: bool) -> Result<SymmetricMatrix> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidArgument(format!("omega = {omega} must be positive")));
    }
    let mut m = if single { single_adjacency(g) } else { multigraph_adjacency(g) };
    m.scale(omega.sqrt().recip());
    Ok(m)
}
