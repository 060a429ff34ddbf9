//! Per-antenna position optimization.
//!
//! One antenna's contribution to the link objective reduces to a Hermitian
//! quadratic form `f(r)^H B f(r)` in its field response vector. That form is
//! convex in `f` but not in the position `r`, so each step builds two nested
//! bounds which are tight at the current iterate: a linearization in `f`
//! (valid because `B` is PSD), then a quadratic minorant in `r` whose
//! curvature is capped by a closed-form majorizer constant. The surrogate has
//! spherical level sets, so the unconstrained maximizer is a single gradient
//! step; when it violates the region or spacing constraints, an exact
//! active-set QP over the linearized constraints takes its place.

use nalgebra::{Matrix2, Vector2};

use crate::channel::{field_response, PathSet};
use crate::error::{Error, Result};
use crate::geometry::{Position, Region};
use crate::{CMat, CVec};

use std::f64::consts::PI;

/// Hermitian PSD quadratic form `f(r)^H B f(r)` over one antenna's position.
#[derive(Debug, Clone)]
pub struct QuadraticFormObjective<'a> {
    matrix: CMat,
    paths: &'a PathSet,
    wavelength: f64,
}

impl<'a> QuadraticFormObjective<'a> {
    pub fn new(matrix: CMat, paths: &'a PathSet, wavelength: f64) -> Self {
        debug_assert_eq!(matrix.nrows(), paths.len());
        debug_assert_eq!(matrix.ncols(), paths.len());
        debug_assert!((&matrix - matrix.adjoint()).camax() <= 1e-9 * (1.0 + matrix.camax()));
        Self {
            matrix,
            paths,
            wavelength,
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn paths(&self) -> &PathSet {
        self.paths
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Objective value `f(p)^H B f(p)` (real for Hermitian `B`).
    pub fn value(&self, p: Position) -> f64 {
        let f = field_response(p, self.paths, self.wavelength);
        (f.adjoint() * &self.matrix * &f)[(0, 0)].re
    }

    /// Surrogate coefficient vector `b = B f(at)`; all derivative and
    /// majorizer formulas below are driven by it.
    pub fn coefficients(&self, at: Position) -> CVec {
        &self.matrix * field_response(at, self.paths, self.wavelength)
    }
}

/// Phase mismatch of path `k` between the response at `p` and coefficient
/// `b_k`.
fn phase_mismatch(b: &CVec, p: Position, k: usize, paths: &PathSet, wavelength: f64) -> f64 {
    2.0 * PI * crate::channel::propagation_offset(p, k, paths) / wavelength - b[k].arg()
}

/// Gradient of the linearized objective `Re{b^H f(r)}` at `at`.
pub fn surrogate_gradient(
    b: &CVec,
    at: Position,
    paths: &PathSet,
    wavelength: f64,
) -> Vector2<f64> {
    let scale = -2.0 * PI / wavelength;
    let mut gx = 0.0;
    let mut gy = 0.0;
    for k in 0..paths.len() {
        let kappa = phase_mismatch(b, at, k, paths, wavelength);
        let amp = b[k].norm();
        let theta = paths.elevation[k];
        let phi = paths.azimuth[k];
        gx += amp * theta.sin() * phi.cos() * kappa.sin();
        gy += amp * theta.cos() * kappa.sin();
    }
    Vector2::new(scale * gx, scale * gy)
}

/// Hessian of the linearized objective `Re{b^H f(r)}` at `at`.
pub fn surrogate_hessian(
    b: &CVec,
    at: Position,
    paths: &PathSet,
    wavelength: f64,
) -> Matrix2<f64> {
    let scale = -4.0 * PI * PI / (wavelength * wavelength);
    let mut hxx = 0.0;
    let mut hxy = 0.0;
    let mut hyy = 0.0;
    for k in 0..paths.len() {
        let kappa = phase_mismatch(b, at, k, paths, wavelength);
        let amp = b[k].norm() * kappa.cos();
        let sx = paths.elevation[k].sin() * paths.azimuth[k].cos();
        let cy = paths.elevation[k].cos();
        hxx += amp * sx * sx;
        hxy += amp * sx * cy;
        hyy += amp * cy * cy;
    }
    Matrix2::new(scale * hxx, scale * hxy, scale * hxy, scale * hyy)
}

/// Uniform curvature bound `delta = (8 pi^2 / wavelength^2) sum_k |b_k|`;
/// dominates the spectral norm of [`surrogate_hessian`] at every position.
pub fn majorizer_delta(b: &CVec, wavelength: f64) -> f64 {
    8.0 * PI * PI / (wavelength * wavelength) * b.iter().map(|z| z.norm()).sum::<f64>()
}

/// Unconstrained maximizer of the quadratic surrogate: `at + grad / delta`.
/// A zero `delta` means the surrogate is stationary and `at` is returned
/// unchanged.
pub fn unconstrained_step(grad: Vector2<f64>, delta: f64, at: Position) -> Position {
    if delta <= 0.0 {
        return at;
    }
    Position::new(at.x + grad.x / delta, at.y + grad.y / delta)
}

/// Linearized minimum-distance constraint: the true constraint
/// `||r - anchor|| >= min_distance` relaxed to the half-plane
/// `u^T (r - anchor) >= min_distance` with `u` the unit vector from `anchor`
/// towards the feasible `reference` point. Satisfying the half-plane implies
/// the true constraint.
#[derive(Debug, Clone, Copy)]
pub struct LinearizedDistanceConstraint {
    pub anchor: Position,
    pub reference: Position,
    pub min_distance: f64,
}

/// Half-plane `a . r >= b` with `a` of unit norm where it matters.
#[derive(Debug, Clone, Copy)]
struct HalfPlane {
    a: Vector2<f64>,
    b: f64,
}

impl HalfPlane {
    fn satisfied(&self, r: Vector2<f64>, tol: f64) -> bool {
        self.a.dot(&r) >= self.b - tol
    }
}

fn as_vec(p: Position) -> Vector2<f64> {
    Vector2::new(p.x, p.y)
}

/// Maximize the quadratic surrogate subject to the rectangle bounds and the
/// linearized distance constraints by exact active-set enumeration: evaluate
/// the unconstrained point, its projection onto each constraint boundary,
/// and every pair intersection, then keep the best feasible candidate.
/// Circle regions are handled by a post-hoc projection; the caller re-checks
/// feasibility against the original constraints either way.
pub fn solve_constrained_qp(
    delta: f64,
    grad: Vector2<f64>,
    at: Position,
    region: &Region,
    constraints: &[LinearizedDistanceConstraint],
) -> Result<Position> {
    assert!(delta > 0.0, "the QP needs strictly concave curvature");
    let linear = grad + delta * as_vec(at);
    let target = linear / delta;

    let mut planes: Vec<HalfPlane> = Vec::with_capacity(constraints.len() + 4);
    let circle_region = match *region {
        Region::Rectangle {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        } => {
            planes.push(HalfPlane { a: Vector2::new(1.0, 0.0), b: x_lo });
            planes.push(HalfPlane { a: Vector2::new(-1.0, 0.0), b: -x_hi });
            planes.push(HalfPlane { a: Vector2::new(0.0, 1.0), b: y_lo });
            planes.push(HalfPlane { a: Vector2::new(0.0, -1.0), b: -y_hi });
            None
        }
        Region::Circle { .. } => Some(*region),
    };
    for c in constraints {
        let offset = as_vec(c.reference) - as_vec(c.anchor);
        let norm = offset.norm();
        if norm == 0.0 {
            return Err(Error::NumericalFailure(
                "distance constraint reference coincides with its anchor".into(),
            ));
        }
        let u = offset / norm;
        planes.push(HalfPlane {
            a: u,
            b: c.min_distance + u.dot(&as_vec(c.anchor)),
        });
    }

    let mut candidates: Vec<Vector2<f64>> = vec![target];
    for p in &planes {
        // projection of the unconstrained optimum onto the boundary line
        let shift = (p.b - p.a.dot(&target)) / p.a.norm_squared();
        candidates.push(target + p.a * shift);
    }
    for (i, pi) in planes.iter().enumerate() {
        for pj in &planes[i + 1..] {
            let det = pi.a.x * pj.a.y - pi.a.y * pj.a.x;
            if det.abs() <= 1e-12 {
                continue;
            }
            candidates.push(Vector2::new(
                (pi.b * pj.a.y - pj.b * pi.a.y) / det,
                (pi.a.x * pj.b - pj.a.x * pi.b) / det,
            ));
        }
    }

    let objective = |r: &Vector2<f64>| -0.5 * delta * r.norm_squared() + linear.dot(r);
    let mut best: Option<(Vector2<f64>, f64)> = None;
    for cand in candidates {
        if !cand.iter().all(|v| v.is_finite()) {
            continue;
        }
        let feas_tol = 1e-9;
        if !planes.iter().all(|p| p.satisfied(cand, feas_tol)) {
            continue;
        }
        let val = objective(&cand);
        best = match best {
            None => Some((cand, val)),
            Some((prev, prev_val)) => {
                let tie = (val - prev_val).abs() <= 1e-12 * prev_val.abs().max(1.0);
                if (tie && lexicographically_before(cand, prev)) || (!tie && val > prev_val) {
                    Some((cand, val))
                } else {
                    Some((prev, prev_val))
                }
            }
        };
    }

    let (mut solution, _) = best.ok_or_else(|| {
        Error::NumericalFailure("no feasible candidate in the constrained position step".into())
    })?;
    if let Some(circle) = circle_region {
        solution = as_vec(circle.project(Position::new(solution.x, solution.y)));
    }
    Ok(Position::new(solution.x, solution.y))
}

fn lexicographically_before(a: Vector2<f64>, b: Vector2<f64>) -> bool {
    (a.x, a.y) < (b.x, b.y)
}

fn spacing_ok(p: Position, others: &[Position], min_distance: f64) -> bool {
    others.iter().all(|o| o.distance(&p) >= min_distance)
}

/// Maximize `f(r)^H B f(r)` over one antenna position by repeated surrogate
/// steps, keeping every iterate feasible.
///
/// Each iteration rebuilds the coefficients, gradient and majorizer at the
/// current point, takes the closed-form step, and falls back to the
/// constrained QP when that step leaves the feasible set. A lone antenna
/// (no `others`) skips the QP: projecting the step onto the region is
/// exact because the surrogate has spherical level sets. Terminates when the
/// relative objective increase drops below `eps` or after `max_iters`
/// iterations; the objective value never decreases along the way.
pub fn sca_optimize_position(
    obj: &QuadraticFormObjective,
    start: Position,
    region: &Region,
    others: &[Position],
    min_distance: f64,
    eps: f64,
    max_iters: usize,
) -> Result<Position> {
    debug_assert!(region.contains(start) && spacing_ok(start, others, min_distance));
    let mut current = start;
    let mut value = obj.value(current);
    for _ in 0..max_iters {
        let b = obj.coefficients(current);
        let delta = majorizer_delta(&b, obj.wavelength());
        if delta <= 0.0 {
            break; // zero coefficients: the objective is flat
        }
        let grad = surrogate_gradient(&b, current, obj.paths(), obj.wavelength());
        let cand = unconstrained_step(grad, delta, current);
        let next = if region.contains(cand) && spacing_ok(cand, others, min_distance) {
            cand
        } else if others.is_empty() {
            region.project(cand)
        } else {
            let constraints: Vec<LinearizedDistanceConstraint> = others
                .iter()
                .map(|&anchor| LinearizedDistanceConstraint {
                    anchor,
                    reference: current,
                    min_distance,
                })
                .collect();
            let qp = solve_constrained_qp(delta, grad, current, region, &constraints)?;
            // The linearized constraints imply the true ones; re-check
            // exactly and hold the position if rounding broke the guarantee.
            if region.contains(qp) && spacing_ok(qp, others, min_distance) {
                qp
            } else {
                let clamped = region.project(qp);
                if region.contains(clamped) && spacing_ok(clamped, others, min_distance) {
                    clamped
                } else {
                    current
                }
            }
        };
        let next_value = obj.value(next);
        if next_value < value {
            break; // rounding produced a non-improving step; keep the iterate
        }
        let gain = next_value - value;
        current = next;
        value = next_value;
        if gain < eps * value.max(1e-12) {
            break;
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_paths(len: usize, rng: &mut ChaCha8Rng) -> PathSet {
        PathSet::new(
            (0..len).map(|_| rng.random::<f64>() * PI).collect(),
            (0..len).map(|_| rng.random::<f64>() * PI).collect(),
        )
        .unwrap()
    }

    fn random_psd(len: usize, rng: &mut ChaCha8Rng) -> CMat {
        let x = CMat::from_fn(len, len, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        &x * x.adjoint()
    }

    fn random_position(extent: f64, rng: &mut ChaCha8Rng) -> Position {
        Position::new(
            (rng.random::<f64>() - 0.5) * extent,
            (rng.random::<f64>() - 0.5) * extent,
        )
    }

    /// Direct evaluation of the linearized objective Re{b^H f(r)}.
    fn bar_g(b: &CVec, p: Position, paths: &PathSet, wavelength: f64) -> f64 {
        (b.adjoint() * field_response(p, paths, wavelength))[(0, 0)].re
    }

    #[test]
    fn identity_matrix_at_origin_gives_all_ones_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let paths = random_paths(4, &mut rng);
        let obj = QuadraticFormObjective::new(CMat::identity(4, 4), &paths, 1.0);
        let b = obj.coefficients(Position::new(0.0, 0.0));
        for z in b.iter() {
            assert_relative_eq!(z.re, 1.0, epsilon = 1e-14);
            assert_relative_eq!(z.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_matrix_gives_zero_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let paths = random_paths(3, &mut rng);
        let obj = QuadraticFormObjective::new(CMat::zeros(3, 3), &paths, 1.0);
        let b = obj.coefficients(Position::new(0.4, -0.7));
        assert!(b.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn coefficients_match_naive_matrix_vector_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let paths = random_paths(5, &mut rng);
        let m = random_psd(5, &mut rng);
        let at = random_position(2.0, &mut rng);
        let obj = QuadraticFormObjective::new(m.clone(), &paths, 1.0);
        let b = obj.coefficients(at);
        let f = field_response(at, &paths, 1.0);
        for q in 0..5 {
            let mut acc = C64::new(0.0, 0.0);
            for p in 0..5 {
                acc += m[(q, p)] * f[p];
            }
            assert_relative_eq!((b[q] - acc).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_coefficients_give_zero_gradient_and_hessian() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let paths = random_paths(3, &mut rng);
        let b = CVec::zeros(3);
        let at = Position::new(0.2, 0.1);
        assert_eq!(surrogate_gradient(&b, at, &paths, 1.0), Vector2::zeros());
        assert_eq!(surrogate_hessian(&b, at, &paths, 1.0), Matrix2::zeros());
    }

    #[test]
    fn gradient_vanishes_at_perfect_phase_alignment() {
        // single path with b real positive at the origin: kappa = 0 there
        let paths = PathSet::new(vec![1.1], vec![0.4]).unwrap();
        let b = CVec::from_vec(vec![C64::new(2.0, 0.0)]);
        let g = surrogate_gradient(&b, Position::new(0.0, 0.0), &paths, 1.0);
        assert_relative_eq!(g.norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gradient_matches_central_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let paths = random_paths(6, &mut rng);
            let m = random_psd(6, &mut rng);
            let obj = QuadraticFormObjective::new(m, &paths, 1.0);
            let at = random_position(3.0, &mut rng);
            let b = obj.coefficients(at);
            let g = surrogate_gradient(&b, at, &paths, 1.0);
            let h = 1e-6;
            let fd_x = (bar_g(&b, at.translate(h, 0.0), &paths, 1.0)
                - bar_g(&b, at.translate(-h, 0.0), &paths, 1.0))
                / (2.0 * h);
            let fd_y = (bar_g(&b, at.translate(0.0, h), &paths, 1.0)
                - bar_g(&b, at.translate(0.0, -h), &paths, 1.0))
                / (2.0 * h);
            let fd = Vector2::new(fd_x, fd_y);
            assert!(
                (g - fd).norm() <= 1e-5 * fd.norm().max(1.0),
                "gradient {g:?} vs finite difference {fd:?}"
            );
        }
    }

    #[test]
    fn hessian_is_symmetric_and_matches_gradient_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..25 {
            let paths = random_paths(5, &mut rng);
            let m = random_psd(5, &mut rng);
            let obj = QuadraticFormObjective::new(m, &paths, 1.0);
            let at = random_position(3.0, &mut rng);
            let b = obj.coefficients(at);
            let hess = surrogate_hessian(&b, at, &paths, 1.0);
            assert_eq!(hess[(0, 1)], hess[(1, 0)]);
            let h = 1e-6;
            let gxp = surrogate_gradient(&b, at.translate(h, 0.0), &paths, 1.0);
            let gxm = surrogate_gradient(&b, at.translate(-h, 0.0), &paths, 1.0);
            let gyp = surrogate_gradient(&b, at.translate(0.0, h), &paths, 1.0);
            let gym = surrogate_gradient(&b, at.translate(0.0, -h), &paths, 1.0);
            let fd = Matrix2::new(
                (gxp.x - gxm.x) / (2.0 * h),
                (gyp.x - gym.x) / (2.0 * h),
                (gxp.y - gxm.y) / (2.0 * h),
                (gyp.y - gym.y) / (2.0 * h),
            );
            assert!(
                (hess - fd).norm() <= 1e-4 * fd.norm().max(1.0),
                "hessian {hess:?} vs finite difference {fd:?}"
            );
        }
    }

    #[test]
    fn delta_closed_form_examples() {
        let b = CVec::from_vec(vec![C64::new(0.0, 1.0)]);
        assert_relative_eq!(majorizer_delta(&b, 1.0), 8.0 * PI * PI, max_relative = 1e-14);
        assert_eq!(majorizer_delta(&CVec::zeros(3), 1.0), 0.0);
    }

    #[test]
    fn delta_dominates_hessian_spectral_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let paths = random_paths(6, &mut rng);
            let m = random_psd(6, &mut rng);
            let obj = QuadraticFormObjective::new(m, &paths, 1.0);
            let anchor = random_position(3.0, &mut rng);
            let b = obj.coefficients(anchor);
            let delta = majorizer_delta(&b, 1.0);
            for _ in 0..100 {
                let p = random_position(3.0, &mut rng);
                let hess = surrogate_hessian(&b, p, &paths, 1.0);
                let spectral = hess
                    .symmetric_eigen()
                    .eigenvalues
                    .iter()
                    .fold(0.0f64, |acc, ev| acc.max(ev.abs()));
                assert!(delta >= spectral - 1e-9);
            }
        }
    }

    #[test]
    fn unconstrained_step_examples() {
        let at = Position::new(0.3, -0.2);
        assert_eq!(unconstrained_step(Vector2::zeros(), 2.0, at), at);
        let moved = unconstrained_step(Vector2::new(2.0, 0.0), 2.0, at);
        assert_relative_eq!(moved.x, 1.3, max_relative = 1e-15);
        assert_relative_eq!(moved.y, -0.2, max_relative = 1e-15);
        assert_eq!(unconstrained_step(Vector2::new(1.0, 1.0), 0.0, at), at);
    }

    #[test]
    fn unconstrained_step_maximizes_the_surrogate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let grad = Vector2::new(rng.sample::<f64, _>(StandardNormal), rng.sample(StandardNormal));
        let delta = 1.7;
        let at = random_position(1.0, &mut rng);
        let star = unconstrained_step(grad, delta, at);
        let surrogate = |p: Position| {
            let r = as_vec(p);
            -0.5 * delta * r.norm_squared() + (grad + delta * as_vec(at)).dot(&r)
        };
        let best = surrogate(star);
        for _ in 0..1000 {
            let p = random_position(10.0, &mut rng);
            assert!(surrogate(p) <= best + 1e-12);
        }
    }

    #[test]
    fn qp_returns_unconstrained_step_when_interior() {
        let region = Region::square(4.0);
        let at = Position::new(0.1, 0.2);
        let grad = Vector2::new(0.3, -0.4);
        let delta = 2.0;
        let free = unconstrained_step(grad, delta, at);
        let sol = solve_constrained_qp(delta, grad, at, &region, &[]).unwrap();
        assert_relative_eq!(sol.x, free.x, epsilon = 1e-12);
        assert_relative_eq!(sol.y, free.y, epsilon = 1e-12);
    }

    #[test]
    fn qp_projects_onto_a_violated_half_plane() {
        // neighbor to the right; the step would cross the linearized boundary
        let region = Region::square(10.0);
        let at = Position::new(0.0, 0.0);
        let anchor = Position::new(1.0, 0.0);
        let cons = [LinearizedDistanceConstraint {
            anchor,
            reference: at,
            min_distance: 1.0,
        }];
        // unconstrained optimum at (0.8, 0.3): violates u.(r - anchor) >= 1
        // with u = (-1, 0), i.e. x <= 0
        let delta = 1.0;
        let grad = Vector2::new(0.8, 0.3);
        let sol = solve_constrained_qp(delta, grad, at, &region, &cons).unwrap();
        assert_relative_eq!(sol.x, 0.0, epsilon = 1e-9);
        assert_relative_eq!(sol.y, 0.3, epsilon = 1e-9);
    }

    #[test]
    fn qp_matches_dense_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let region = Region::Rectangle {
            x_lo: -1.0,
            x_hi: 1.0,
            y_lo: -1.0,
            y_hi: 1.0,
        };
        for _ in 0..10 {
            // a feasible current point and three non-colliding neighbors
            let at = random_position(1.0, &mut rng);
            let mut anchors = Vec::new();
            while anchors.len() < 3 {
                let cand = random_position(3.0, &mut rng);
                if cand.distance(&at) >= 0.5 {
                    anchors.push(cand);
                }
            }
            let cons: Vec<_> = anchors
                .iter()
                .map(|&anchor| LinearizedDistanceConstraint {
                    anchor,
                    reference: at,
                    min_distance: 0.5,
                })
                .collect();
            let delta = 0.5 + rng.random::<f64>();
            let grad = Vector2::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            );
            let sol = solve_constrained_qp(delta, grad, at, &region, &cons).unwrap();

            let linear = grad + delta * as_vec(at);
            let objective =
                |r: Vector2<f64>| -0.5 * delta * r.norm_squared() + linear.dot(&r);
            let feasible = |r: Vector2<f64>| {
                let p = Position::new(r.x, r.y);
                region.contains(p)
                    && cons.iter().all(|c| {
                        let u = (as_vec(c.reference) - as_vec(c.anchor)).normalize();
                        u.dot(&(r - as_vec(c.anchor))) >= c.min_distance
                    })
            };
            let mut best = f64::NEG_INFINITY;
            let steps = 400; // 0.005 spacing
            for i in 0..=steps {
                for j in 0..=steps {
                    let r = Vector2::new(
                        -1.0 + 2.0 * i as f64 / steps as f64,
                        -1.0 + 2.0 * j as f64 / steps as f64,
                    );
                    if feasible(r) {
                        best = best.max(objective(r));
                    }
                }
            }
            assert!(
                objective(as_vec(sol)) >= best - 1e-6,
                "qp objective {} below grid maximum {best}",
                objective(as_vec(sol))
            );
        }
    }

    #[test]
    fn zero_objective_returns_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let paths = random_paths(4, &mut rng);
        let obj = QuadraticFormObjective::new(CMat::zeros(4, 4), &paths, 1.0);
        let start = Position::new(0.3, 0.3);
        let out =
            sca_optimize_position(&obj, start, &Region::square(3.0), &[], 0.5, 1e-3, 100).unwrap();
        assert_eq!(out, start);
    }

    #[test]
    fn objective_is_monotone_across_iteration_prefixes() {
        // running with max_iters = k yields the k-th iterate, so the values
        // along increasing k trace the iteration sequence
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let paths = random_paths(8, &mut rng);
        let m = random_psd(8, &mut rng);
        let obj = QuadraticFormObjective::new(m, &paths, 1.0);
        let region = Region::square(3.0);
        let others = [Position::new(0.8, 0.0), Position::new(-0.8, 0.3)];
        let start = Position::new(0.0, -0.9);
        let mut prev = obj.value(start);
        for k in 1..=40 {
            let p = sca_optimize_position(&obj, start, &region, &others, 0.5, 1e-9, k).unwrap();
            assert!(region.contains(p) && spacing_ok(p, &others, 0.5), "iterate must stay feasible");
            let val = obj.value(p);
            assert!(val >= prev - 1e-9, "objective decreased at prefix {k}");
            prev = val;
        }
    }

    #[test]
    fn rank_one_single_antenna_run_reaches_grid_quality() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let region = Region::square(2.0);
        let mut hits = 0;
        let trials = 20;
        for _ in 0..trials {
            let paths = random_paths(5, &mut rng);
            let c = CVec::from_fn(5, |_, _| {
                C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let obj = QuadraticFormObjective::new(&c * c.adjoint(), &paths, 1.0);
            let best = sca_optimize_position(
                &obj,
                Position::new(0.0, 0.0),
                &region,
                &[],
                0.5,
                1e-9,
                500,
            )
            .unwrap();
            let mut grid_max = f64::NEG_INFINITY;
            let steps = 200;
            for i in 0..=steps {
                for j in 0..=steps {
                    let p = Position::new(
                        -1.0 + 2.0 * i as f64 / steps as f64,
                        -1.0 + 2.0 * j as f64 / steps as f64,
                    );
                    grid_max = grid_max.max(obj.value(p));
                }
            }
            if obj.value(best) >= 0.9 * grid_max {
                hits += 1;
            }
        }
        assert!(hits * 100 >= trials * 80, "only {hits}/{trials} runs reached 90% of grid max");
    }

    #[test]
    fn linearization_is_tight_and_globally_minorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let paths = random_paths(6, &mut rng);
            let m = random_psd(6, &mut rng);
            let obj = QuadraticFormObjective::new(m, &paths, 1.0);
            let at = random_position(3.0, &mut rng);
            let b = obj.coefficients(at);
            let g_at = obj.value(at);

            // tightness at the expansion point
            let tight = 2.0 * bar_g(&b, at, &paths, 1.0) - g_at;
            assert_relative_eq!(tight, g_at, max_relative = 1e-10);

            // global minorization of both nested bounds
            let delta = majorizer_delta(&b, 1.0);
            let grad = surrogate_gradient(&b, at, &paths, 1.0);
            for _ in 0..1000 {
                let r = random_position(3.0, &mut rng);
                let lower_linear = 2.0 * bar_g(&b, r, &paths, 1.0) - g_at;
                assert!(obj.value(r) >= lower_linear - 1e-9);
                let dr = as_vec(r) - as_vec(at);
                let quad =
                    bar_g(&b, at, &paths, 1.0) + grad.dot(&dr) - 0.5 * delta * dr.norm_squared();
                assert!(bar_g(&b, r, &paths, 1.0) >= quad - 1e-9);
            }
        }
    }

    #[test]
    fn delta_identity_dominates_hessian_everywhere_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let paths = random_paths(7, &mut rng);
        let m = random_psd(7, &mut rng);
        let obj = QuadraticFormObjective::new(m, &paths, 1.0);
        let b = obj.coefficients(Position::new(0.1, 0.2));
        let delta = majorizer_delta(&b, 1.0);
        for _ in 0..100 {
            let p = random_position(4.0, &mut rng);
            let hess = surrogate_hessian(&b, p, &paths, 1.0);
            let gap = Matrix2::identity() * delta - hess;
            let min_eig = gap
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .fold(f64::INFINITY, |acc, &ev| acc.min(ev));
            assert!(min_eig >= -1e-9);
        }
    }
}
