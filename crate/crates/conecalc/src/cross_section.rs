//! Spectra of Laplace-Beltrami operators on cone cross-sections.
//!
//! A cross-section is a compact manifold X (with or without boundary);
//! the data consumed by the rest of the crate is the spectrum of its
//! Laplacian at t = 0: distinct eigenvalues in strictly decreasing order,
//! multiplicities, and (where available) orthonormal eigenfunctions with
//! a quadrature rule.  Analytic constructors cover intervals with
//! Dirichlet ends, circles, and round spheres; arbitrary one-dimensional
//! cross-sections go through a symmetric Sturm-Liouville discretization
//! and [`spectrum_from_matrix`].

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Eigenvalues of discretized operators may exceed zero by roundoff;
/// beyond `POSITIVITY_TOL * max(1, |lambda|_max)` the matrix is rejected.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Default clustering tolerance for multiplicity detection, relative to
/// max(1, |lambda|).
pub const CLUSTER_TOL: f64 = 1e-8;

/// Nodes used by the analytic quadrature rules.
const QUAD_NODES: usize = 512;

/// One distinct eigenvalue of the cross-section Laplacian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMode {
    pub lambda: f64,
    pub multiplicity: usize,
    /// Mode label as used in exponent bookkeeping: 0, 1, 2, ... for
    /// closed cross-sections, 1, 2, ... when a boundary removes the
    /// constant mode.
    pub label: usize,
}

/// Boundary condition of a one-dimensional discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BoundaryCondition {
    Dirichlet,
    Periodic,
}

#[derive(Debug, Clone)]
pub enum Geometry {
    /// Interval (0, alpha) with Dirichlet ends; eigenfunctions
    /// sqrt(2/alpha) sin(j pi theta / alpha).
    IntervalDirichlet { alpha: f64 },
    /// Unit circle; eigenfunctions 1/sqrt(2 pi), cos(j theta)/sqrt(pi),
    /// sin(j theta)/sqrt(pi).
    Circle,
    /// Round unit sphere of the given dimension.  Eigenfunction
    /// evaluators exist for dim = 2 (real spherical harmonics); higher
    /// dimensions carry eigenvalues and multiplicities only.
    Sphere { dim: usize },
    /// Spectrum computed from a discretized operator; eigenfunctions are
    /// node samples, orthonormal under the stored quadrature weights.
    Discretized {
        nodes: Vec<f64>,
        weights: Vec<f64>,
        boundary: BoundaryCondition,
        /// functions[mode][multiplicity_index][node].
        functions: Vec<Vec<Vec<f64>>>,
    },
    /// Spectrum loaded from serialized eigenvalue data.  Carries the
    /// cross-section dimension but no eigenfunction samples; evaluator
    /// methods report [`Error::NoEigenfunctions`].
    External { dim: usize },
}

/// Spectrum of a cross-section Laplacian.
#[derive(Debug, Clone)]
pub struct CrossSectionSpectrum {
    geometry: Geometry,
    modes: Vec<SpectralMode>,
    dim: usize,
}

impl CrossSectionSpectrum {
    /// Cross-section dimension n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn modes(&self) -> &[SpectralMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn lambda(&self, mode: usize) -> Result<f64> {
        self.modes
            .get(mode)
            .map(|m| m.lambda)
            .ok_or(Error::ModeOutOfRange { index: mode, count: self.modes.len() })
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.lambda).collect()
    }

    /// Evaluates the `which`-th eigenfunction of the given mode at a
    /// point, supplied as one coordinate for one-dimensional
    /// cross-sections and as (theta, phi) for the two-sphere.
    pub fn eigenfunction(&self, mode: usize, which: usize, x: &[f64]) -> Result<f64> {
        let m = *self
            .modes
            .get(mode)
            .ok_or(Error::ModeOutOfRange { index: mode, count: self.modes.len() })?;
        if which >= m.multiplicity {
            return Err(Error::ModeOutOfRange { index: which, count: m.multiplicity });
        }
        match &self.geometry {
            Geometry::IntervalDirichlet { alpha } => {
                let j = m.label as f64;
                Ok((2.0 / alpha).sqrt() * (j * std::f64::consts::PI * x[0] / alpha).sin())
            }
            Geometry::Circle => {
                let j = m.label as f64;
                if m.label == 0 {
                    Ok(1.0 / (2.0 * std::f64::consts::PI).sqrt())
                } else if which == 0 {
                    Ok((j * x[0]).cos() / std::f64::consts::PI.sqrt())
                } else {
                    Ok((j * x[0]).sin() / std::f64::consts::PI.sqrt())
                }
            }
            Geometry::Sphere { dim: 2 } => {
                let l = m.label as i64;
                let order = which as i64 - l;
                Ok(real_spherical_harmonic(l as u32, order, x[0], x[1]))
            }
            Geometry::Sphere { dim } => Err(Error::NoEigenfunctions(format!(
                "sphere of dimension {dim}; evaluators exist for dimensions 1 and 2"
            ))),
            Geometry::Discretized { nodes, boundary, functions, .. } => {
                Ok(interpolate(nodes, &functions[mode][which], x[0], *boundary))
            }
            Geometry::External { .. } => Err(Error::NoEigenfunctions(
                "spectrum loaded from serialized data carries eigenvalues only".into(),
            )),
        }
    }

    /// Quadrature rule under which the eigenfunctions are orthonormal:
    /// points (as coordinate vectors) and weights.
    pub fn quadrature(&self) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
        match &self.geometry {
            Geometry::IntervalDirichlet { alpha } => {
                let n = QUAD_NODES;
                let h = alpha / (n + 1) as f64;
                Ok(((1..=n).map(|i| vec![i as f64 * h]).collect(), vec![h; n]))
            }
            Geometry::Circle => {
                let n = QUAD_NODES;
                let h = 2.0 * std::f64::consts::PI / n as f64;
                Ok(((0..n).map(|i| vec![i as f64 * h]).collect(), vec![h; n]))
            }
            Geometry::Sphere { dim: 2 } => {
                let (gl_x, gl_w) = gauss_legendre(64);
                let n_phi = 128;
                let h_phi = 2.0 * std::f64::consts::PI / n_phi as f64;
                let mut points = Vec::with_capacity(gl_x.len() * n_phi);
                let mut weights = Vec::with_capacity(gl_x.len() * n_phi);
                for (x, w) in gl_x.iter().zip(&gl_w) {
                    let theta = x.acos();
                    for i in 0..n_phi {
                        points.push(vec![theta, i as f64 * h_phi]);
                        weights.push(w * h_phi);
                    }
                }
                Ok((points, weights))
            }
            Geometry::Sphere { dim } => Err(Error::NoEigenfunctions(format!(
                "sphere of dimension {dim}; quadrature exists for dimensions 1 and 2"
            ))),
            Geometry::Discretized { nodes, weights, .. } => {
                Ok((nodes.iter().map(|&x| vec![x]).collect(), weights.clone()))
            }
            Geometry::External { .. } => Err(Error::NoEigenfunctions(
                "spectrum loaded from serialized data carries eigenvalues only".into(),
            )),
        }
    }

    /// Largest deviation of the eigenfunction Gram matrix from the
    /// identity under [`Self::quadrature`].
    pub fn gram_defect(&self) -> Result<f64> {
        let (points, weights) = self.quadrature()?;
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for (mode, m) in self.modes.iter().enumerate() {
            for which in 0..m.multiplicity {
                columns.push(
                    points
                        .iter()
                        .map(|x| self.eigenfunction(mode, which, x))
                        .collect::<Result<Vec<f64>>>()?,
                );
            }
        }
        let mut worst: f64 = 0.0;
        for (a, col_a) in columns.iter().enumerate() {
            for (b, col_b) in columns.iter().enumerate().skip(a) {
                let inner: f64 =
                    col_a.iter().zip(col_b).zip(&weights).map(|((x, y), w)| w * x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((inner - target).abs());
            }
        }
        Ok(worst)
    }

    /// Rebuilds a spectrum from eigenvalue and multiplicity lists, as
    /// read from serialized data.  The dimension comes from the
    /// geometry; mode labels restart from the geometry's convention
    /// (1 for a Dirichlet interval, 0 otherwise).
    pub fn from_eigenvalue_data(
        geometry: Geometry,
        eigenvalues: &[f64],
        multiplicities: &[usize],
    ) -> Result<Self> {
        if eigenvalues.len() != multiplicities.len() {
            return Err(Error::LengthMismatch {
                expected: eigenvalues.len(),
                got: multiplicities.len(),
            });
        }
        if eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(Error::BadCrossSection("eigenvalues must be finite".into()));
        }
        if let Some(&top) = eigenvalues.first() {
            let scale = eigenvalues.iter().fold(1.0f64, |m, l| m.max(l.abs()));
            if top > POSITIVITY_TOL * scale {
                return Err(Error::PositiveSpectrum {
                    max_eigenvalue: top,
                    tol: POSITIVITY_TOL * scale,
                });
            }
        }
        if multiplicities.iter().any(|&m| m == 0) {
            return Err(Error::BadCrossSection("multiplicities must be at least 1".into()));
        }
        let (dim, first_label) = match &geometry {
            Geometry::IntervalDirichlet { .. } => (1, 1),
            Geometry::Circle => (1, 0),
            Geometry::Sphere { dim } => (*dim, 0),
            Geometry::Discretized { boundary, .. } => {
                (1, if *boundary == BoundaryCondition::Dirichlet { 1 } else { 0 })
            }
            Geometry::External { dim } => (*dim, 0),
        };
        let modes = eigenvalues
            .iter()
            .zip(multiplicities)
            .enumerate()
            .map(|(i, (&lambda, &multiplicity))| SpectralMode {
                lambda,
                multiplicity,
                label: first_label + i,
            })
            .collect();
        Self::from_modes(geometry, modes, dim)
    }

    fn from_modes(geometry: Geometry, modes: Vec<SpectralMode>, dim: usize) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::BadCrossSection("spectrum must retain at least one mode".into()));
        }
        for pair in modes.windows(2) {
            if pair[1].lambda >= pair[0].lambda {
                return Err(Error::BadCrossSection(format!(
                    "distinct eigenvalues must decrease strictly, got {} then {}",
                    pair[0].lambda, pair[1].lambda
                )));
            }
        }
        Ok(CrossSectionSpectrum { geometry, modes, dim })
    }
}

/// Spectrum of the interval (0, alpha) with Dirichlet ends:
/// lambda_j = -(j pi / alpha)^2 for j = 1..=j_max, all simple.
pub fn interval_dirichlet_spectrum(alpha: f64, j_max: usize) -> Result<CrossSectionSpectrum> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::BadCrossSection(format!("interval length must be positive, got {alpha}")));
    }
    if j_max == 0 {
        return Err(Error::NoModes);
    }
    let modes = (1..=j_max)
        .map(|j| {
            let q = j as f64 * std::f64::consts::PI / alpha;
            SpectralMode { lambda: -q * q, multiplicity: 1, label: j }
        })
        .collect();
    CrossSectionSpectrum::from_modes(Geometry::IntervalDirichlet { alpha }, modes, 1)
}

/// Spectrum of the unit circle: lambda_j = -j^2 for j = 0..=j_max, with
/// multiplicity 1 for j = 0 and 2 otherwise.
pub fn circle_spectrum(j_max: usize) -> Result<CrossSectionSpectrum> {
    let modes = (0..=j_max)
        .map(|j| SpectralMode {
            lambda: -((j * j) as f64),
            multiplicity: if j == 0 { 1 } else { 2 },
            label: j,
        })
        .collect();
    CrossSectionSpectrum::from_modes(Geometry::Circle, modes, 1)
}

/// Spectrum of the round unit sphere S^dim:
/// lambda_l = -l (l + dim - 1), multiplicity
/// C(l + dim, dim) - C(l + dim - 2, dim).  For dim = 1 this is the
/// circle and the circle constructor is returned.
pub fn sphere_spectrum(dim: usize, l_max: usize) -> Result<CrossSectionSpectrum> {
    if dim == 0 {
        return Err(Error::BadCrossSection("sphere dimension must be at least 1".into()));
    }
    if dim == 1 {
        return circle_spectrum(l_max);
    }
    let modes = (0..=l_max)
        .map(|l| SpectralMode {
            lambda: -((l * (l + dim - 1)) as f64),
            multiplicity: harmonic_multiplicity(dim, l),
            label: l,
        })
        .collect();
    CrossSectionSpectrum::from_modes(Geometry::Sphere { dim }, modes, dim)
}

/// Dimension of the space of degree-l spherical harmonics on S^n.
fn harmonic_multiplicity(n: usize, l: usize) -> usize {
    (binomial(l + n, n) - if l >= 2 { binomial(l + n - 2, n) } else { 0 }) as usize
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Symmetric finite-difference discretization of a one-dimensional
/// cross-section Laplacian.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub matrix: DMatrix<f64>,
    pub nodes: Vec<f64>,
    /// Quadrature weights; function samples f relate to matrix
    /// eigenvectors v through f_i = v_i / sqrt(weights_i).
    pub weights: Vec<f64>,
    pub boundary: BoundaryCondition,
}

/// Discretizes the Laplacian of the metric h(theta) d theta^2 on a
/// one-dimensional cross-section of the given length:
/// h^{-1/2} d/d theta (h^{-1/2} d/d theta), in conservative
/// (flux) form on a uniform grid of n interior nodes, symmetrized so the
/// returned matrix is exactly symmetric.  Eigenvalues converge at second
/// order in the grid spacing.
pub fn sturm_liouville_discretize<F: Fn(f64) -> f64>(
    coefficient: F,
    length: f64,
    n: usize,
    boundary: BoundaryCondition,
) -> Result<DiscretizedOperator> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::BadCrossSection(format!("cross-section length must be positive, got {length}")));
    }
    if n < 8 {
        return Err(Error::GridTooSmall { min: 8, got: n });
    }
    let (h_step, nodes): (f64, Vec<f64>) = match boundary {
        BoundaryCondition::Dirichlet => {
            let h = length / (n + 1) as f64;
            (h, (1..=n).map(|i| i as f64 * h).collect())
        }
        BoundaryCondition::Periodic => {
            let h = length / n as f64;
            (h, (0..n).map(|i| i as f64 * h).collect())
        }
    };

    let coeff_at = |theta: f64| -> Result<f64> {
        let c = coefficient(theta);
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::DegenerateCoefficient { index: usize::MAX, value: c });
        }
        Ok(c)
    };
    let mut weights = Vec::with_capacity(n);
    for (i, &x) in nodes.iter().enumerate() {
        let c = coefficient(x);
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::DegenerateCoefficient { index: i, value: c });
        }
        weights.push(c.sqrt() * h_step);
    }

    // Midpoint fluxes b = h^{-1/2}; for Dirichlet ends the flux uses the
    // zero boundary value, for periodic grids it wraps around.
    let flux = |theta: f64| -> Result<f64> { Ok(1.0 / coeff_at(theta)?.sqrt()) };
    let mut matrix = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let b_left = flux(nodes[i] - 0.5 * h_step)?;
        let b_right = flux(nodes[i] + 0.5 * h_step)?;
        let wi = weights[i];
        matrix[(i, i)] = -(b_left + b_right) / (h_step * wi);
        if i + 1 < n {
            let v = b_right / (h_step * (wi * weights[i + 1]).sqrt());
            matrix[(i, i + 1)] = v;
            matrix[(i + 1, i)] = v;
        }
    }
    if boundary == BoundaryCondition::Periodic && n > 2 {
        let b_wrap = flux(nodes[0] - 0.5 * h_step)?;
        let v = b_wrap / (h_step * (weights[0] * weights[n - 1]).sqrt());
        matrix[(0, n - 1)] = v;
        matrix[(n - 1, 0)] = v;
    }
    Ok(DiscretizedOperator { matrix, nodes, weights, boundary })
}

/// Eigen-decomposition of a discretized cross-section operator, with
/// eigenvalues clustered into multiplicities.
///
/// `cluster_tol` overrides the default relative tolerance
/// [`CLUSTER_TOL`] * max(1, |lambda|).  Spectra reaching above zero by
/// more than [`POSITIVITY_TOL`] * max(1, |lambda|_max) are rejected.
pub fn spectrum_from_matrix(
    op: &DiscretizedOperator,
    cluster_tol: Option<f64>,
) -> Result<CrossSectionSpectrum> {
    let n = op.matrix.nrows();
    let sym = op.matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        sym.eigenvalues[b].partial_cmp(&sym.eigenvalues[a]).expect("finite eigenvalues")
    });

    let lambda_max = sym.eigenvalues[order[0]];
    let scale = order.iter().map(|&i| sym.eigenvalues[i].abs()).fold(1.0, f64::max);
    if lambda_max > POSITIVITY_TOL * scale {
        return Err(Error::PositiveSpectrum {
            max_eigenvalue: lambda_max,
            tol: POSITIVITY_TOL * scale,
        });
    }

    let mut modes = Vec::new();
    let mut functions: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut cluster: Vec<usize> = vec![order[0]];
    let flush = |cluster: &[usize],
                 modes: &mut Vec<SpectralMode>,
                 functions: &mut Vec<Vec<Vec<f64>>>| {
        let lambda =
            cluster.iter().map(|&i| sym.eigenvalues[i]).sum::<f64>() / cluster.len() as f64;
        modes.push(SpectralMode { lambda, multiplicity: cluster.len(), label: 0 });
        functions.push(
            cluster
                .iter()
                .map(|&i| {
                    (0..n)
                        .map(|row| sym.eigenvectors[(row, i)] / op.weights[row].sqrt())
                        .collect()
                })
                .collect(),
        );
    };
    for &i in &order[1..] {
        let prev = sym.eigenvalues[*cluster.last().expect("nonempty cluster")];
        let tol = cluster_tol.unwrap_or_else(|| CLUSTER_TOL * prev.abs().max(1.0));
        if (sym.eigenvalues[i] - prev).abs() <= tol {
            cluster.push(i);
        } else {
            flush(&cluster, &mut modes, &mut functions);
            cluster = vec![i];
        }
    }
    flush(&cluster, &mut modes, &mut functions);

    let first_label = match op.boundary {
        BoundaryCondition::Periodic => 0,
        BoundaryCondition::Dirichlet => 1,
    };
    for (idx, mode) in modes.iter_mut().enumerate() {
        mode.label = first_label + idx;
    }
    CrossSectionSpectrum::from_modes(
        Geometry::Discretized {
            nodes: op.nodes.clone(),
            weights: op.weights.clone(),
            boundary: op.boundary,
            functions,
        },
        modes,
        1,
    )
}

fn interpolate(nodes: &[f64], values: &[f64], x: f64, boundary: BoundaryCondition) -> f64 {
    let n = nodes.len();
    let h = nodes[1] - nodes[0];
    match boundary {
        BoundaryCondition::Dirichlet => {
            // Zero boundary values at theta = 0 and theta = length.
            if x <= nodes[0] {
                return values[0] * (x / nodes[0]).max(0.0);
            }
            if x >= nodes[n - 1] {
                let end = nodes[n - 1] + h;
                return values[n - 1] * ((end - x) / h).max(0.0);
            }
            let i = ((x - nodes[0]) / h).floor() as usize;
            let i = i.min(n - 2);
            let frac = (x - nodes[i]) / h;
            values[i] * (1.0 - frac) + values[i + 1] * frac
        }
        BoundaryCondition::Periodic => {
            let length = h * n as f64;
            let mut y = (x - nodes[0]).rem_euclid(length);
            let i = (y / h).floor() as usize;
            y -= i as f64 * h;
            let frac = y / h;
            let i = i.min(n - 1);
            values[i] * (1.0 - frac) + values[(i + 1) % n] * frac
        }
    }
}

/// Orthonormal real spherical harmonic Y_{l, m}(theta, phi) on S^2;
/// m ranges over -l..=l, with cos(m phi) branches for m > 0 and
/// sin(|m| phi) branches for m < 0.
pub fn real_spherical_harmonic(l: u32, m: i64, theta: f64, phi: f64) -> f64 {
    let abs_m = m.unsigned_abs() as u32;
    let p = normalized_assoc_legendre(l, abs_m, theta.cos());
    if m == 0 {
        p
    } else if m > 0 {
        std::f64::consts::SQRT_2 * p * (abs_m as f64 * phi).cos()
    } else {
        std::f64::consts::SQRT_2 * p * (abs_m as f64 * phi).sin()
    }
}

/// Associated Legendre function with orthonormal spherical normalization
/// sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(x), by the stable upward
/// recurrence in l.
fn normalized_assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    debug_assert!(m <= l);
    let sin_theta = (1.0 - x * x).max(0.0).sqrt();
    // P-bar_m^m.
    let mut pmm = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
    for k in 1..=m {
        pmm *= -((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * sin_theta;
    }
    if l == m {
        return pmm;
    }
    // P-bar_{m+1}^m.
    let mut prev = pmm;
    let mut curr = x * ((2 * m + 3) as f64).sqrt() * pmm;
    for ll in (m + 2)..=l {
        let llf = ll as f64;
        let mf = m as f64;
        let a = ((4.0 * llf * llf - 1.0) / (llf * llf - mf * mf)).sqrt();
        let b = (((llf - 1.0).powi(2) - mf * mf) / (4.0 * (llf - 1.0).powi(2) - 1.0)).sqrt();
        let next = a * (x * curr - b * prev);
        prev = curr;
        curr = next;
    }
    curr
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on
/// the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
