//! Finite joint distributions over (Bob, Alice, Eve) outcomes and their
//! bivariate and single-variable marginals.
//!
//! Cells are stored densely in row-major order with Bob outermost, then
//! Alice, then Eve, so cell `(i, j, k)` holds the probability that Bob saw
//! `i`, Alice saw `j` and Eve saw `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `|sum - 1|` accepted by validation.
pub const NORM_TOL: f64 = 1e-12;

/// Negative entries down to `-NEG_CLAMP` are treated as round-off and set to 0.
pub const NEG_CLAMP: f64 = 1e-15;

/// Alphabet sizes of the three parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub bob: usize,
    pub alice: usize,
    pub eve: usize,
}

impl Shape {
    pub fn new(bob: usize, alice: usize, eve: usize) -> Result<Self> {
        if bob == 0 || alice == 0 || eve == 0 {
            return Err(Error::InvalidShape { bob, alice, eve });
        }
        Ok(Shape { bob, alice, eve })
    }

    pub fn cells(&self) -> usize {
        self.bob * self.alice * self.eve
    }

    /// Flat index of cell `(bob, alice, eve)`.
    #[inline]
    pub fn index(&self, bob: usize, alice: usize, eve: usize) -> usize {
        (bob * self.alice + alice) * self.eve + eve
    }

    /// Inverse of [`Shape::index`].
    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize, usize) {
        let eve = index % self.eve;
        let rest = index / self.eve;
        (rest / self.alice, rest % self.alice, eve)
    }

    pub fn size_of(&self, var: VarId) -> usize {
        match var {
            VarId::Bob => self.bob,
            VarId::Alice => self.alice,
            VarId::Eve => self.eve,
        }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.bob, self.alice, self.eve)
    }
}

/// One of the three parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarId {
    Bob,
    Alice,
    Eve,
}

impl VarId {
    fn pick(self, (bob, alice, eve): (usize, usize, usize)) -> usize {
        match self {
            VarId::Bob => bob,
            VarId::Alice => alice,
            VarId::Eve => eve,
        }
    }
}

/// Checks entries of a probability vector, clamping round-off negatives.
///
/// Returns the cleaned vector. Never renormalizes.
pub(crate) fn check_probs(mut probs: Vec<f64>) -> Result<Vec<f64>> {
    let mut sum = 0.0;
    for (index, p) in probs.iter_mut().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if *p < -NEG_CLAMP {
            return Err(Error::NegativeEntry { index, value: *p });
        }
        if *p < 0.0 {
            *p = 0.0;
        }
        sum += *p;
    }
    if (sum - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(probs)
}

/// Dense joint distribution P(bob, alice, eve).
///
/// Immutable once constructed; every value of this type satisfies the
/// nonnegativity and normalization invariants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripartiteDistribution {
    shape: Shape,
    probs: Vec<f64>,
}

impl TripartiteDistribution {
    /// Validates `probs` against `shape`. See [`validate_tripartite`].
    pub fn new(probs: Vec<f64>, shape: Shape) -> Result<Self> {
        if probs.len() != shape.cells() {
            return Err(Error::ShapeMismatch {
                expected: shape.cells(),
                actual: probs.len(),
            });
        }
        let probs = check_probs(probs)?;
        Ok(TripartiteDistribution { shape, probs })
    }

    /// Divides by the total mass first. This is the only constructor that
    /// rescales its input.
    pub fn normalized(mut probs: Vec<f64>, shape: Shape) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution(format!("total mass {total}")));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Self::new(probs, shape)
    }

    /// Uniform distribution over all cells.
    pub fn uniform(shape: Shape) -> Self {
        let n = shape.cells();
        TripartiteDistribution {
            shape,
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Product distribution `bob ⊗ alice ⊗ eve`.
    pub fn product(bob: &[f64], alice: &[f64], eve: &[f64]) -> Result<Self> {
        let shape = Shape::new(bob.len(), alice.len(), eve.len())?;
        let mut probs = Vec::with_capacity(shape.cells());
        for &pb in bob {
            for &pa in alice {
                for &pe in eve {
                    probs.push(pb * pa * pe);
                }
            }
        }
        Self::new(probs, shape)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn get(&self, bob: usize, alice: usize, eve: usize) -> f64 {
        self.probs[self.shape.index(bob, alice, eve)]
    }

    /// See [`marginal_pair`].
    pub fn marginal_pair(&self, x: VarId, y: VarId) -> Result<PairDistribution> {
        marginal_pair(self, x, y)
    }

    /// See [`marginal_single`].
    pub fn marginal_single(&self, x: VarId) -> Vec<f64> {
        marginal_single(self, x)
    }
}

/// Builds a [`TripartiteDistribution`], rejecting negative, unnormalized or
/// wrongly sized input. Entries in `[-1e-15, 0)` are clamped to zero.
pub fn validate_tripartite(probs: Vec<f64>, shape: Shape) -> Result<TripartiteDistribution> {
    TripartiteDistribution::new(probs, shape)
}

/// Bivariate table with `rows × cols` entries in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDistribution {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl PairDistribution {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDistribution(format!(
                "pair table must be non-empty, got {rows}x{cols}"
            )));
        }
        if probs.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                actual: probs.len(),
            });
        }
        let probs = check_probs(probs)?;
        Ok(PairDistribution { rows, cols, probs })
    }

    /// Builds from nested rows, mostly for tests and examples.
    pub fn from_rows(table: &[Vec<f64>]) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        if table.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("ragged table".into()));
        }
        Self::new(rows, cols, table.concat())
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), rows * cols);
        PairDistribution { rows, cols, probs }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.probs[row * self.cols + col]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.probs.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for row in self.probs.chunks(self.cols) {
            for (o, p) in out.iter_mut().zip(row) {
                *o += p;
            }
        }
        out
    }

    pub fn transpose(&self) -> PairDistribution {
        let mut probs = Vec::with_capacity(self.probs.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                probs.push(self.get(r, c));
            }
        }
        PairDistribution {
            rows: self.cols,
            cols: self.rows,
            probs,
        }
    }
}

/// Sums out the third variable; rows are indexed by `x`, columns by `y`.
pub fn marginal_pair(dist: &TripartiteDistribution, x: VarId, y: VarId) -> Result<PairDistribution> {
    if x == y {
        return Err(Error::SameVariable);
    }
    let shape = dist.shape;
    let (rows, cols) = (shape.size_of(x), shape.size_of(y));
    let mut probs = vec![0.0; rows * cols];
    for (i, &p) in dist.probs.iter().enumerate() {
        let c = shape.coords(i);
        probs[x.pick(c) * cols + y.pick(c)] += p;
    }
    Ok(PairDistribution::from_raw(rows, cols, probs))
}

/// One-variable marginal of `x`.
pub fn marginal_single(dist: &TripartiteDistribution, x: VarId) -> Vec<f64> {
    let shape = dist.shape;
    let mut out = vec![0.0; shape.size_of(x)];
    for (i, &p) in dist.probs.iter().enumerate() {
        out[x.pick(shape.coords(i))] += p;
    }
    out
}
