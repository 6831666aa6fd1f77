//! Diagonal representation of the Dirichlet Laplacian on `[0,1]^d`.
//!
//! Eigenfunctions are `e_n(xi) = 2^{d/2} prod_i sin(n_i pi xi_i)` with
//! eigenvalues `lambda_n = pi^2 sum_i n_i^2`, truncated to `n_i <= N`.
//! Grid functions are sampled at the interior points `xi_j = j / (N + 1)`,
//! `j in {1..N}^d`, which makes the grid/coefficient map a scaled type-I
//! discrete sine transform and therefore exactly invertible.
//!
//! Normalization: coefficients `v` and grid samples `g` are related by
//! `v = (N+1)^{-d/2} S g`, with `S` the orthogonal symmetric sine matrix
//! applied along every axis. Hence `sum v_n^2 = (N+1)^{-d} sum g_j^2`: the
//! coefficient norm equals the grid quadrature `L^2` norm with cell volume
//! `(N+1)^{-d}`.

use crate::error::{check_len, invalid, Result};
use crate::scalar::{lit, Real};

/// Which Banach norm a grid function is measured in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceTag {
    /// `C(O)`, measured by the maximum over grid points.
    ContinuousSup,
    /// `L^p(O)` with `p >= 2`, measured by grid quadrature.
    LpGrid(f64),
}

impl SpaceTag {
    pub fn lp(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 2.0 {
            Ok(SpaceTag::LpGrid(p))
        } else {
            Err(invalid(format!("L^p exponent must be finite and >= 2, got {p}")))
        }
    }
}

/// A nonnegative smoothness index `rho` for the spaces `H_rho = Dom((-A)^rho)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalIndex<T>(T);

impl<T: Real> FractionalIndex<T> {
    pub fn new(rho: T) -> Result<Self> {
        if rho >= T::zero() && rho.is_finite() {
            Ok(Self(rho))
        } else {
            Err(invalid(format!("fractional index must be >= 0, got {rho}")))
        }
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Coordinates in the eigenbasis, indexed by flattened multi-index
/// (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector<T> {
    coeffs: Vec<T>,
}

impl<T: Real> SpectralVector<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!("non-finite coefficient at index {i}")));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); len],
        }
    }

    /// Unit vector along the flattened mode `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.coeffs[index] = T::one();
        v
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Plain Euclidean norm of the coefficients, i.e. the `H` norm.
    pub fn norm(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }
}

/// Samples on the interior tensor grid, tagged with the norm of `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    dim: usize,
    points_per_axis: usize,
    values: Vec<T>,
    space: SpaceTag,
}

impl<T: Real> GridFunction<T> {
    pub fn new(dim: usize, points_per_axis: usize, values: Vec<T>, space: SpaceTag) -> Result<Self> {
        check_len(points_per_axis.pow(dim as u32), values.len())?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite grid value at index {i}")));
        }
        Ok(Self {
            dim,
            points_per_axis,
            values,
            space,
        })
    }

    pub fn zeros(op: &SpectralOperator<T>, space: SpaceTag) -> Self {
        Self {
            dim: op.dim,
            points_per_axis: op.modes_per_axis,
            values: vec![T::zero(); op.len()],
            space,
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(op: &SpectralOperator<T>, space: SpaceTag, f: impl Fn(&[T]) -> T) -> Result<Self> {
        let values = (0..op.len()).map(|j| f(&op.grid_point(j))).collect();
        Self::new(op.dim, op.modes_per_axis, values, space)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn with_space(mut self, space: SpaceTag) -> Self {
        self.space = space;
        self
    }

    /// Volume `(N+1)^{-d}` attached to each grid point by the quadrature.
    pub fn cell_volume(&self) -> T {
        T::from_usize(self.points_per_axis + 1)
            .unwrap()
            .powi(self.dim as i32)
            .recip()
    }

    /// Norm of `E`: grid maximum for `C(O)`, grid quadrature for `L^p`.
    pub fn space_norm(&self) -> T {
        match self.space {
            SpaceTag::ContinuousSup => self.sup_norm(),
            SpaceTag::LpGrid(p) => self.lp_norm(lit(p)),
        }
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn lp_norm(&self, p: T) -> T {
        let s: T = self.values.iter().map(|v| v.abs().powf(p)).sum();
        (self.cell_volume() * s).powf(p.recip())
    }

    /// Grid quadrature `L^2` norm; equals the `H` norm of the coefficients.
    pub fn h_norm(&self) -> T {
        self.inner(self).unwrap_or_else(|_| T::nan()).sqrt()
    }

    /// Grid quadrature `L^2` inner product.
    pub fn inner(&self, other: &Self) -> Result<T> {
        check_len(self.len(), other.len())?;
        let s: T = self.values.iter().zip(&other.values).map(|(&a, &b)| a * b).sum();
        Ok(self.cell_volume() * s)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(self.with_values(self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    fn with_values(&self, values: Vec<T>) -> Self {
        Self {
            dim: self.dim,
            points_per_axis: self.points_per_axis,
            values,
            space: self.space,
        }
    }
}

/// Diagonalized negative Dirichlet Laplacian truncated to `N` modes per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperator<T> {
    dim: usize,
    modes_per_axis: usize,
    eigenvalues: Vec<T>,
    ranks: Vec<usize>,
    zeta_a: T,
    color_exponent: T,
    // Orthogonal symmetric sine matrix, row-major N x N.
    sine: Vec<T>,
}

impl<T: Real> SpectralOperator<T> {
    /// Builds the Dirichlet operator on `[0,1]^d`, `d in {1,2,3}`, with noise
    /// coloring `R = (-A)^{color_exponent}`.
    pub fn dirichlet(dim: usize, modes_per_axis: usize, color_exponent: T) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(invalid(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if modes_per_axis == 0 {
            return Err(invalid("modes per axis must be positive"));
        }
        if !color_exponent.is_finite() {
            return Err(invalid("color exponent must be finite"));
        }
        let n = modes_per_axis;
        let len = n.pow(dim as u32);
        let pi2 = T::PI() * T::PI();
        let eigenvalues: Vec<T> = (0..len)
            .map(|i| {
                let s: usize = multi_index(i, n, dim).iter().map(|&k| k * k).sum();
                pi2 * T::from_usize(s).unwrap()
            })
            .collect();

        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&a, &b| eigenvalues[a].partial_cmp(&eigenvalues[b]).unwrap().then(a.cmp(&b)));
        let mut ranks = vec![0; len];
        for (r, &i) in order.iter().enumerate() {
            ranks[i] = r + 1;
        }

        let np1 = T::from_usize(n + 1).unwrap();
        let norm = (lit::<T>(2.0) / np1).sqrt();
        let mut sine = vec![T::zero(); n * n];
        for row in 0..n {
            for col in 0..n {
                // Reduce the product modulo 2(N+1) before scaling for accuracy.
                let k = ((row + 1) * (col + 1)) % (2 * (n + 1));
                sine[row * n + col] = norm * (T::PI() * T::from_usize(k).unwrap() / np1).sin();
            }
        }

        Ok(Self {
            dim,
            modes_per_axis: n,
            eigenvalues,
            ranks,
            zeta_a: T::zero(),
            color_exponent,
            sine,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes_per_axis(&self) -> usize {
        self.modes_per_axis
    }

    /// Number of retained modes, `N^d`.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn zeta_a(&self) -> T {
        self.zeta_a
    }

    pub fn color_exponent(&self) -> T {
        self.color_exponent
    }

    /// Smallest eigenvalue, `pi^2 d`.
    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    /// One-based multi-index of flattened mode `i`.
    pub fn multi_index(&self, i: usize) -> Vec<usize> {
        multi_index(i, self.modes_per_axis, self.dim)
    }

    /// One-based position of mode `i` in the nondecreasing eigenvalue order
    /// (ties broken by flattened index). In `d = 1` this is the mode number.
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    /// Coordinates of grid point `j` (flattened like the modes).
    pub fn grid_point(&self, j: usize) -> Vec<T> {
        let np1 = T::from_usize(self.modes_per_axis + 1).unwrap();
        multi_index(j, self.modes_per_axis, self.dim)
            .into_iter()
            .map(|k| T::from_usize(k).unwrap() / np1)
            .collect()
    }

    /// Eigenfunction `e_i` sampled on the grid.
    pub fn eigenfunction(&self, i: usize, space: SpaceTag) -> GridFunction<T> {
        let n = self.multi_index(i);
        let amp = lit::<T>(2.0).sqrt().powi(self.dim as i32);
        let values = (0..self.len())
            .map(|j| {
                self.grid_point(j)
                    .iter()
                    .zip(&n)
                    .fold(amp, |acc, (&x, &k)| acc * (T::PI() * T::from_usize(k).unwrap() * x).sin())
            })
            .collect();
        GridFunction {
            dim: self.dim,
            points_per_axis: self.modes_per_axis,
            values,
            space,
        }
    }

    /// `|v|_rho = |(-A)^rho v|_H`.
    pub fn frac_norm(&self, v: &SpectralVector<T>, rho: FractionalIndex<T>) -> Result<T> {
        check_len(self.len(), v.len())?;
        let two_rho = rho.value() + rho.value();
        let s: T = self
            .eigenvalues
            .iter()
            .zip(v.coeffs())
            .map(|(&l, &c)| if two_rho == T::zero() { c * c } else { l.powf(two_rho) * c * c })
            .sum();
        Ok(s.sqrt())
    }

    /// `e^{tA} v`, i.e. coordinatewise multiplication by `e^{-lambda_n t}`.
    pub fn semigroup_apply(&self, t: T, v: &SpectralVector<T>) -> Result<SpectralVector<T>> {
        if !(t >= T::zero()) {
            return Err(invalid(format!("semigroup time must be >= 0, got {t}")));
        }
        check_len(self.len(), v.len())?;
        Ok(SpectralVector {
            coeffs: self
                .eigenvalues
                .iter()
                .zip(v.coeffs())
                .map(|(&l, &c)| (-l * t).exp() * c)
                .collect(),
        })
    }

    /// Empirical bound on the smoothing constant `C_{rho1,rho2}`: the sup over
    /// `t_grid` and all modes of `(t lambda)^{rho2-rho1} e^{-lambda t}`.
    pub fn smoothing_constant_probe(
        &self,
        rho1: FractionalIndex<T>,
        rho2: FractionalIndex<T>,
        t_grid: &[T],
    ) -> Result<T> {
        let gap = rho2.value() - rho1.value();
        if gap < T::zero() {
            return Err(invalid("smoothing probe needs rho2 >= rho1"));
        }
        if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > T::zero())) {
            return Err(invalid("t_grid must be nonempty with positive entries"));
        }
        let mut sup = T::zero();
        for &t in t_grid {
            for &l in &self.eigenvalues {
                let u = l * t;
                let val = if gap == T::zero() { (-u).exp() } else { u.powf(gap) * (-u).exp() };
                sup = sup.max(val);
            }
        }
        Ok(sup)
    }

    /// Grid samples to eigenbasis coefficients.
    pub fn to_spectral(&self, g: &GridFunction<T>) -> Result<SpectralVector<T>> {
        self.check_grid(g)?;
        let mut data = g.values.clone();
        self.sine_transform(&mut data);
        let scale = T::from_usize(self.modes_per_axis + 1)
            .unwrap()
            .powi(self.dim as i32)
            .sqrt()
            .recip();
        data.iter_mut().for_each(|x| *x = *x * scale);
        Ok(SpectralVector { coeffs: data })
    }

    /// Eigenbasis coefficients to grid samples tagged with `space`.
    pub fn from_spectral(&self, v: &SpectralVector<T>, space: SpaceTag) -> Result<GridFunction<T>> {
        check_len(self.len(), v.len())?;
        let mut data = v.coeffs.clone();
        self.sine_transform(&mut data);
        let scale = T::from_usize(self.modes_per_axis + 1)
            .unwrap()
            .powi(self.dim as i32)
            .sqrt();
        data.iter_mut().for_each(|x| *x = *x * scale);
        Ok(GridFunction {
            dim: self.dim,
            points_per_axis: self.modes_per_axis,
            values: data,
            space,
        })
    }

    pub(crate) fn check_grid(&self, g: &GridFunction<T>) -> Result<()> {
        if g.dim != self.dim || g.points_per_axis != self.modes_per_axis {
            return Err(invalid(format!(
                "grid {}^{} does not match operator {}^{}",
                g.points_per_axis, g.dim, self.modes_per_axis, self.dim
            )));
        }
        Ok(())
    }

    // Applies the orthogonal sine matrix along every axis in place.
    fn sine_transform(&self, data: &mut [T]) {
        let n = self.modes_per_axis;
        let mut line = vec![T::zero(); n];
        let mut out = vec![T::zero(); n];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = stride * n;
            for start in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (k, l) in line.iter_mut().enumerate() {
                        *l = data[base + k * stride];
                    }
                    for (row, o) in out.iter_mut().enumerate() {
                        let r = &self.sine[row * n..(row + 1) * n];
                        *o = r.iter().zip(&line).map(|(&a, &b)| a * b).sum();
                    }
                    for (k, &o) in out.iter().enumerate() {
                        data[base + k * stride] = o;
                    }
                }
            }
        }
    }
}

fn multi_index(mut i: usize, n: usize, dim: usize) -> Vec<usize> {
    let mut idx = vec![0; dim];
    for slot in idx.iter_mut().rev() {
        *slot = i % n + 1;
        i /= n;
    }
    idx
}
