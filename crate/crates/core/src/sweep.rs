//! Brute-force enumeration of two-dimensional subalgebras by their unit normals.
//!
//! The sweep never consults [`crate::subalgebra::classify`]. It samples normals on a
//! Fibonacci sphere, locates zeros of `f(ν) = ⟨[A, B], ν⟩` (with `A, B` an oriented
//! orthonormal basis of `ν⊥`), and groups them into conjugacy classes:
//!
//! * normals fixed by the whole adjoint action (ideals) are one class each;
//! * the remaining zeros form curves, and each connected component of a curve with the
//!   fixed points removed is one orbit.
//!
//! Classes related by a metric-preserving diagonal automorphism are then identified.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{FrameVector, StructureData};
use crate::subalgebra::subalgebra_residual;

/// Smallest grid accepted by [`sweep_oracle`].
pub const MIN_GRID: usize = 1000;

const BISECTION_STEPS: usize = 60;
const REFINE_STEPS: usize = 200;
/// Tolerance on `|sin|` between a linking chord and the orbit direction.
const ALIGN_TOL: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterKind {
    /// Normal of an ideal; fixed by every inner automorphism.
    Fixed,
    /// A one-dimensional orbit of normals.
    Curve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCluster {
    pub kind: ClusterKind,
    pub representative: FrameVector,
    /// Every zero assigned to the cluster (unit normals, up to sign).
    pub points: Vec<FrameVector>,
    /// Index of the automorphism class the cluster belongs to.
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub grid_size: usize,
    /// Typical angular spacing of the grid.
    pub spacing: f64,
    pub clusters: Vec<SweepCluster>,
    /// Largest `|f|` over all accepted zeros.
    pub max_residual: f64,
}

impl SweepResult {
    /// Number of classes after the automorphism quotient.
    pub fn class_count(&self) -> usize {
        let mut ids: Vec<usize> = self.clusters.iter().map(|c| c.class).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Representative normals, one per cluster (before the automorphism quotient).
    pub fn normals(&self) -> Vec<FrameVector> {
        self.clusters.iter().map(|c| c.representative).collect()
    }

    /// Index of the cluster that contains `normal`, if any.
    pub fn cluster_of(&self, normal: &FrameVector) -> Option<usize> {
        let n = normal.normalized()?;
        let mut best: Option<(usize, f64)> = None;
        for (i, c) in self.clusters.iter().enumerate() {
            let d = match c.kind {
                ClusterKind::Fixed => {
                    let d = projective_distance(&n, &c.representative);
                    if d > 1e-5 {
                        continue;
                    }
                    d
                }
                ClusterKind::Curve => {
                    let d = c
                        .points
                        .iter()
                        .map(|p| projective_distance(&n, p))
                        .fold(f64::INFINITY, f64::min);
                    if d > 2.0 * self.spacing {
                        continue;
                    }
                    d
                }
            };
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best.map(|(i, _)| i)
    }
}

fn projective_distance(a: &FrameVector, b: &FrameVector) -> f64 {
    (*a - *b).norm().min((*a + *b).norm())
}

fn fibonacci_sphere(n: usize) -> Vec<FrameVector> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            FrameVector::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Oriented orthonormal basis `(A, B)` of `ν⊥` with `A ∧ B = ν`.
fn plane_basis(nu: &FrameVector) -> (FrameVector, FrameVector) {
    let seed = FrameVector::BASIS
        .into_iter()
        .min_by(|a, b| a.dot(nu).abs().total_cmp(&b.dot(nu).abs()))
        .expect("three basis vectors");
    let a = seed
        .wedge(nu)
        .normalized()
        .expect("seed is not parallel to ν");
    (a, nu.wedge(&a))
}

struct Sampler<'a> {
    s: &'a StructureData,
    ad_t: [nalgebra::Matrix3<f64>; 3],
}

impl<'a> Sampler<'a> {
    fn new(s: &'a StructureData) -> Self {
        let ad_t = FrameVector::BASIS.map(|e| s.ad_matrix(&e).transpose());
        Sampler { s, ad_t }
    }

    fn f(&self, nu: &FrameVector) -> f64 {
        let (a, b) = plane_basis(nu);
        subalgebra_residual(self.s, &a, &b).expect("orthonormal pair")
    }

    /// Tangent vectors of the adjoint action on normals, `−(ad_{Ei})ᵀν` projected to `ν⊥`.
    fn orbit_tangents(&self, nu: &FrameVector) -> [FrameVector; 3] {
        self.ad_t.map(|m| {
            let raw = -FrameVector::from_vector3(&(m * nu.to_vector3()));
            raw - *nu * raw.dot(nu)
        })
    }

    fn orbit_direction(&self, nu: &FrameVector) -> Option<FrameVector> {
        self.orbit_tangents(nu)
            .into_iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .and_then(|t| t.normalized())
    }

    /// `(f, T1, T2, T3)` stacked; vanishes exactly at normals of ideals.
    fn fixed_residual(&self, nu: &FrameVector) -> [f64; 10] {
        let t = self.orbit_tangents(nu);
        let mut r = [0.0; 10];
        r[0] = self.f(nu);
        for i in 0..3 {
            for j in 0..3 {
                r[1 + 3 * i + j] = t[i][j];
            }
        }
        r
    }

    /// Gauss–Newton on the sphere for a residual vector, with central-difference Jacobian.
    fn refine<const M: usize, F>(&self, start: FrameVector, residual: F) -> FrameVector
    where
        F: Fn(&FrameVector) -> [f64; M],
    {
        let mut nu = start;
        let h = 1e-6;
        for _ in 0..REFINE_STEPS {
            let r = residual(&nu);
            let rn = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if rn <= 1e-15 {
                break;
            }
            let (u, w) = plane_basis(&nu);
            let mut jac = [[0.0; 2]; M];
            for (k, dir) in [u, w].iter().enumerate() {
                let rp = residual(&(nu + *dir * h).normalized().expect("unit"));
                let rm = residual(&(nu - *dir * h).normalized().expect("unit"));
                for i in 0..M {
                    jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
                }
            }
            // normal equations for the 2×2 least-squares step
            let (mut a, mut b, mut d, mut g0, mut g1) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for i in 0..M {
                a += jac[i][0] * jac[i][0];
                b += jac[i][0] * jac[i][1];
                d += jac[i][1] * jac[i][1];
                g0 += jac[i][0] * r[i];
                g1 += jac[i][1] * r[i];
            }
            let det = a * d - b * b;
            let (s0, s1) = if det.abs() > 1e-14 * (a * d).max(1e-300) {
                ((d * g0 - b * g1) / det, (a * g1 - b * g0) / det)
            } else if a + d > 0.0 {
                // rank-deficient: gradient-direction step scaled like Gauss–Newton in 1D
                let gn = g0 * g0 + g1 * g1;
                let c = (g0 * (a * g0 + b * g1) + g1 * (b * g0 + d * g1)).max(1e-300);
                (g0 * gn / c, g1 * gn / c)
            } else {
                break;
            };
            let next = (nu - u * s0 - w * s1).normalized().expect("finite step");
            let rnext = residual(&next);
            let rnext_n = rnext.iter().map(|x| x * x).sum::<f64>().sqrt();
            if rnext_n.is_nan() || rnext_n >= rn {
                break;
            }
            nu = next;
        }
        nu
    }
}

/// Pairs of grid neighbours within `radius`, using that Fibonacci heights are sorted.
fn neighbour_pairs(grid: &[FrameVector], radius: f64) -> Vec<(usize, usize)> {
    let n = grid.len();
    let window = ((radius * n as f64 / 2.0).ceil() as usize).max(1) + 1;
    let r2 = radius * radius;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..(i + 1 + window).min(n) {
            if (grid[i] - grid[j]).norm_squared() <= r2 {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Diagonal sign matrices that are Lie algebra automorphisms (and hence isometries).
fn sign_automorphisms(s: &StructureData) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for mask in 1..8u32 {
        let d = [0, 1, 2].map(|k| if mask & (1 << k) != 0 { -1.0 } else { 1.0 });
        let apply = |v: &FrameVector| FrameVector::new(d[0] * v[0], d[1] * v[1], d[2] * v[2]);
        let ok = (0..3).all(|i| {
            (0..3).all(|j| {
                let (ei, ej) = (FrameVector::BASIS[i], FrameVector::BASIS[j]);
                let lhs = apply(&s.bracket(&ei, &ej));
                let rhs = s.bracket(&apply(&ei), &apply(&ej));
                (lhs - rhs).max_abs() <= s.zero_tol()
            })
        });
        if ok {
            out.push(d);
        }
    }
    out
}

/// Sample the sphere of normals and cluster the subalgebra condition's solutions.
pub fn sweep_oracle(s: &StructureData, n: usize) -> Result<SweepResult> {
    if n < MIN_GRID {
        return Err(Error::InvalidGrid { n, min: MIN_GRID });
    }
    let sampler = Sampler::new(s);
    let grid = fibonacci_sphere(n);
    let spacing = (4.0 * std::f64::consts::PI / n as f64).sqrt();
    let values: Vec<f64> = grid.iter().map(|nu| sampler.f(nu)).collect();
    let f_scale = values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let zero_tol = 1e-9 * f_scale.max(1.0);
    let pairs = neighbour_pairs(&grid, 1.6 * spacing);

    // zeros crossed by a neighbour edge
    let mut zeros: Vec<FrameVector> = Vec::new();
    for &(i, j) in &pairs {
        let (fi, fj) = (values[i], values[j]);
        if fi == 0.0 {
            zeros.push(grid[i]);
            continue;
        }
        if fi * fj >= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        let point = |u: f64| {
            (grid[i] * (1.0 - u) + grid[j] * u)
                .normalized()
                .expect("short arc")
        };
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if sampler.f(&point(mid)) * fi > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        zeros.push(point(0.5 * (lo + hi)));
    }
    // zeros where f touches zero without changing sign
    let band = 4.0 * spacing * spacing * f_scale;
    for (i, nu) in grid.iter().enumerate() {
        if values[i].abs() <= band {
            let refined = sampler.refine(*nu, |p| [sampler.f(p)]);
            if sampler.f(&refined).abs() <= zero_tol {
                zeros.push(refined);
            }
        }
    }

    // ideals: local minima of the fixed-point residual, refined
    let residual_norm = |nu: &FrameVector| {
        sampler
            .fixed_residual(nu)
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    };
    let rho: Vec<f64> = grid.iter().map(residual_norm).collect();
    let mut is_min = vec![true; n];
    for &(i, j) in &pairs {
        if rho[i] <= rho[j] {
            is_min[j] = false;
        } else {
            is_min[i] = false;
        }
    }
    let mut fixed: Vec<FrameVector> = Vec::new();
    for i in (0..n).filter(|&i| is_min[i]) {
        let p = sampler.refine(grid[i], |q| sampler.fixed_residual(q));
        if residual_norm(&p) <= zero_tol
            && !fixed.iter().any(|q| projective_distance(&p, q) <= 1e-6)
        {
            fixed.push(p);
        }
    }

    // orbit curves: zeros away from ideals, linked along the orbit direction
    let exclusion = 2.0 * spacing;
    let moving: Vec<(FrameVector, FrameVector)> = zeros
        .iter()
        .filter(|z| fixed.iter().all(|q| projective_distance(z, q) > exclusion))
        .filter_map(|z| sampler.orbit_direction(z).map(|d| (*z, d)))
        .collect();
    let link = 2.5 * spacing;
    let mut uf = UnionFind::new(moving.len());
    for a in 0..moving.len() {
        for b in (a + 1)..moving.len() {
            let (p, dp) = moving[a];
            let (mut q, dq) = moving[b];
            if (p - q).norm() > (p + q).norm() {
                q = -q;
            }
            let chord = q - p;
            let len = chord.norm();
            if len > link {
                continue;
            }
            if len > 1e-12 {
                let c = chord * (1.0 / len);
                let sin_p = c.wedge(&dp).norm();
                let sin_q = c.wedge(&dq).norm();
                if sin_p > ALIGN_TOL || sin_q > ALIGN_TOL {
                    continue;
                }
            }
            uf.union(a, b);
        }
    }

    let mut clusters: Vec<SweepCluster> = fixed
        .iter()
        .map(|p| SweepCluster {
            kind: ClusterKind::Fixed,
            representative: *p,
            points: vec![*p],
            class: 0,
        })
        .collect();
    let mut roots: Vec<usize> = Vec::new();
    for (a, item) in moving.iter().enumerate() {
        let r = uf.find(a);
        let slot = match roots.iter().position(|&x| x == r) {
            Some(k) => k,
            None => {
                roots.push(r);
                clusters.push(SweepCluster {
                    kind: ClusterKind::Curve,
                    representative: item.0,
                    points: Vec::new(),
                    class: 0,
                });
                roots.len() - 1
            }
        };
        clusters[fixed.len() + slot].points.push(item.0);
    }
    // a curve component sampled by a single zero is numerical debris at a tangency
    clusters.retain(|c| c.kind == ClusterKind::Fixed || c.points.len() > 1);

    let max_residual = clusters
        .iter()
        .flat_map(|c| c.points.iter())
        .map(|p| sampler.f(p).abs())
        .fold(0.0, f64::max);

    let mut result = SweepResult {
        grid_size: n,
        spacing,
        clusters,
        max_residual,
    };
    assign_classes(s, &mut result);
    Ok(result)
}

fn assign_classes(s: &StructureData, result: &mut SweepResult) {
    let k = result.clusters.len();
    let mut uf = UnionFind::new(k);
    for d in sign_automorphisms(s) {
        for a in 0..k {
            let r = result.clusters[a].representative;
            let image = FrameVector::new(d[0] * r[0], d[1] * r[1], d[2] * r[2]);
            if let Some(b) = result.cluster_of(&image) {
                if result.clusters[b].kind == result.clusters[a].kind {
                    uf.union(a, b);
                }
            }
        }
    }
    let mut ids: Vec<usize> = Vec::new();
    for a in 0..k {
        let r = uf.find(a);
        let id = match ids.iter().position(|&x| x == r) {
            Some(i) => i,
            None => {
                ids.push(r);
                ids.len() - 1
            }
        };
        result.clusters[a].class = id;
    }
}
