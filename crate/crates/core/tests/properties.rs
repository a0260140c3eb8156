//! Randomized invariants of the projection calculus.

use ballproj::oracle::{difference_quotient, SamplingScheme};
use ballproj::*;
use proptest::prelude::*;

fn coords(dim: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..scale, dim)
}

fn vector(dim: usize, scale: f64) -> impl Strategy<Value = Vector> {
    coords(dim, scale).prop_map(|c| Vector::new(c).unwrap())
}

fn nonzero(dim: usize, scale: f64) -> impl Strategy<Value = Vector> {
    vector(dim, scale).prop_filter("nonzero", |v| v.norm() > 1e-3)
}

fn unit(dim: usize) -> impl Strategy<Value = Vector> {
    nonzero(dim, 1.0).prop_map(|v| v.normalized().unwrap())
}

fn ball(dim: usize) -> impl Strategy<Value = Ball> {
    (vector(dim, 2.0), 0.5..3.0f64).prop_map(|(c, r)| Ball::new(c, r).unwrap())
}

/// A ball with a point on its sphere.
fn boundary_instance() -> impl Strategy<Value = (Ball, Vector)> {
    (1usize..=5).prop_flat_map(|d| {
        (ball(d), unit(d)).prop_map(|(b, e)| {
            let x = b.center().axpy(b.radius(), &e);
            (b, x)
        })
    })
}

/// A ball and a point whose distance to the center ranges over `[0, 3r)`,
/// staying clear of the sphere by 5% of the radius.
fn offsphere_instance() -> impl Strategy<Value = (Ball, Vector)> {
    (1usize..=5).prop_flat_map(|d| {
        (ball(d), unit(d), 0.0..3.0f64)
            .prop_filter("clear of the sphere", |(_, _, s)| (s - 1.0).abs() > 0.05)
            .prop_map(|(b, e, s)| {
                let x = b.center().axpy(s * b.radius(), &e);
                (b, x)
            })
    })
}

fn any_instance() -> impl Strategy<Value = (Ball, Vector)> {
    prop_oneof![boundary_instance(), offsphere_instance()]
}

fn with_vectors<S: Strategy<Value = (Ball, Vector)>>(
    inst: S,
    count: usize,
) -> impl Strategy<Value = (Ball, Vector, Vec<Vector>)> {
    inst.prop_flat_map(move |(b, x)| {
        let d = b.dim();
        (
            Just(b),
            Just(x),
            prop::collection::vec(vector(d, 3.0), count),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ortho_split_invariants((x, u) in (1usize..=8).prop_flat_map(|d| (nonzero(d, 5.0), vector(d, 5.0)))) {
        let s = ortho_split(&x, &u).unwrap();
        let scale = u.norm().max(1.0);
        let rebuilt = x.scale(s.a).axpy(1.0, &s.o);
        prop_assert!(rebuilt.distance(&u) <= 1e-12 * scale);
        prop_assert!(inner(&x, &s.o).unwrap().abs() <= 1e-12 * x.norm() * scale);
        let pyth = s.a * s.a * x.norm_squared() + s.o.norm_squared();
        prop_assert!((u.norm_squared() - pyth).abs() <= 1e-10 * u.norm_squared().max(1.0));
    }
}

proptest! {
    #[test]
    fn ortho_split_is_linear(
        (x, u, v) in (1usize..=6).prop_flat_map(|d| (nonzero(d, 3.0), vector(d, 3.0), vector(d, 3.0))),
        alpha in -2.0..2.0f64,
        beta in -2.0..2.0f64,
    ) {
        let combo = u.scale(alpha).axpy(beta, &v);
        let s = ortho_split(&x, &combo).unwrap();
        let su = ortho_split(&x, &u).unwrap();
        let sv = ortho_split(&x, &v).unwrap();
        let scale = 1.0 + u.norm() + v.norm();
        let a_lin = alpha * su.a + beta * sv.a;
        prop_assert!((s.a - a_lin).abs() <= 1e-12 * scale * (1.0 + 1.0 / x.norm()));
        let o_lin = su.o.scale(alpha).axpy(beta, &sv.o);
        prop_assert!(s.o.distance(&o_lin) <= 1e-12 * scale);
    }

    #[test]
    fn ortho_split_is_continuous_at_the_reference(
        (x, d) in (1usize..=5).prop_flat_map(|n| (nonzero(n, 3.0).prop_filter("not tiny", |x| x.norm() > 0.1), vector(n, 1.0)))
    ) {
        for k in 1..=8 {
            let eps = 10f64.powi(-k);
            let s = ortho_split(&x, &x.axpy(eps, &d)).unwrap();
            let slack = 1e-14 * (1.0 + x.norm());
            prop_assert!((s.a - 1.0).abs() <= eps * d.norm() / x.norm() + slack);
            prop_assert!(s.o.norm() <= eps * d.norm() + slack);
        }
    }

    #[test]
    fn projection_is_idempotent_and_lands_in_the_ball((b, x) in any_instance()) {
        let p = project(&b, &x);
        prop_assert!(b.center().distance(&p) <= b.radius() * (1.0 + 1e-12));
        prop_assert!(project(&b, &p).distance(&p) <= 1e-12);
    }

    #[test]
    fn projection_is_nonexpansive((b, x, vs) in with_vectors(any_instance(), 1)) {
        let x2 = b.center() + &vs[0];
        let lhs = project(&b, &x).distance(&project(&b, &x2));
        prop_assert!(lhs <= x.distance(&x2) + 1e-12);
    }

    #[test]
    fn projection_translation_identity((b, x) in any_instance()) {
        let origin = Ball::centered(b.dim(), b.radius()).unwrap();
        let lhs = project(&b, &x);
        let rhs = b.center() + &project(&origin, &b.offset(&x));
        let scale = x.norm().max(b.center().norm()).max(1.0);
        prop_assert!(lhs.distance(&rhs) <= 1e-14 * scale);
    }

    #[test]
    fn direction_classes_partition_and_match_definition((b, x, vs) in with_vectors(boundary_instance(), 1)) {
        let v = &vs[0];
        prop_assume!(v.norm() > 1e-6);
        let class = direction_class(&b, &x, v, DEFAULT_TAU).unwrap();
        let flipped = direction_class(&b, &x, &-v, DEFAULT_TAU).unwrap();
        let along = inner(&b.offset(&x), v).unwrap();
        if along != 0.0 {
            prop_assert_ne!(class, flipped);
        }
        let gaps: Vec<(f64, f64)> = (3..=8)
            .map(|k| {
                let t = 10f64.powi(-k);
                (t, b.center().distance(&x.axpy(t, v)) - b.radius())
            })
            .collect();
        match class {
            DirectionClass::Up => {
                let min_gap = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
                prop_assert!(min_gap >= -1e-15 * (1.0 + x.norm()), "min gap {min_gap:e}");
            }
            DirectionClass::Down => {
                // steps short enough for the linear term to dominate, and large
                // enough to clear rounding in the distance
                for (t, gap) in gaps {
                    let linear = t * along / b.radius();
                    if t * v.norm_squared() < -along && linear < -1e-13 * (1.0 + x.norm()) {
                        prop_assert!(gap < 0.0, "t={t:e} gap {gap:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn graphical_equals_gateaux_bitwise((b, x, vs) in with_vectors(any_instance(), 1)) {
        let g = gateaux(&b, &x, &vs[0]).unwrap();
        let d = graphical(&b, &x, &vs[0]).unwrap();
        prop_assert_eq!(g.as_slice(), d.as_slice());
    }

    #[test]
    fn gateaux_is_positively_homogeneous((b, x, vs) in with_vectors(any_instance(), 1), lambda in 0.01..50.0f64) {
        let u = &vs[0];
        let lhs = gateaux(&b, &x, &u.scale(lambda)).unwrap();
        let rhs = gateaux(&b, &x, u).unwrap().scale(lambda);
        prop_assert!(lhs.distance(&rhs) <= 1e-13 * lambda.max(1.0) * u.norm().max(1.0));
    }

    #[test]
    fn exterior_gateaux_is_the_frechet_map((b, x, vs) in with_vectors(offsphere_instance(), 1)) {
        prop_assume!(classify(&b, &x, DEFAULT_TAU).unwrap().kind == RegionKind::Exterior);
        let map = frechet_map(&b, &x).unwrap();
        let lhs = gateaux(&b, &x, &vs[0]).unwrap();
        let rhs = apply_linear(&map, &vs[0]).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-14 * vs[0].norm().max(1.0));
    }

    #[test]
    fn scaled_ortho_projector_is_self_adjoint((b, x, vs) in with_vectors(offsphere_instance(), 2)) {
        prop_assume!(classify(&b, &x, DEFAULT_TAU).unwrap().kind == RegionKind::Exterior);
        let map = frechet_map(&b, &x).unwrap();
        let (u, v) = (&vs[0], &vs[1]);
        let lhs = inner(&map.apply(u).unwrap(), v).unwrap();
        let rhs = inner(u, &map.apply(v).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * u.norm() * v.norm() + 1e-300);
        prop_assert!(map.apply(&b.offset(&x)).unwrap().norm() <= 1e-12 * b.offset(&x).norm());
    }

    #[test]
    fn boundary_branches_agree_on_tangent_directions((b, x, vs) in with_vectors(boundary_instance(), 1)) {
        let offset = b.offset(&x);
        prop_assume!(b.dim() > 1);
        let tangent = ortho_split(&offset, &vs[0]).unwrap().o;
        let g = gateaux(&b, &x, &tangent).unwrap();
        // the outward formula subtracts ⟨x−c,u⟩(x−c)/r², which is roundoff here
        prop_assert!(g.distance(&tangent) <= 1e-14 * tangent.norm().max(1.0));
    }

    #[test]
    fn coderivative_is_translation_covariant((b, x, vs) in with_vectors(any_instance(), 1)) {
        let origin = Ball::centered(b.dim(), b.radius()).unwrap();
        let lhs = regular_coderivative(&b, &x, &vs[0], DEFAULT_TAU).unwrap();
        let rhs = regular_coderivative(&origin, &b.offset(&x), &vs[0], DEFAULT_TAU).unwrap();
        prop_assert!(set_equal(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn exterior_coderivative_matches_derivative((b, x, vs) in with_vectors(offsphere_instance(), 1)) {
        prop_assume!(classify(&b, &x, DEFAULT_TAU).unwrap().kind == RegionKind::Exterior);
        let set = regular_coderivative(&b, &x, &vs[0], DEFAULT_TAU).unwrap();
        let g = gateaux(&b, &x, &vs[0]).unwrap();
        let CoderivativeSet::Singleton(z) = set else { panic!("expected singleton") };
        prop_assert!(z.distance(&g) <= 1e-14 * vs[0].norm().max(1.0));
    }

    #[test]
    fn boundary_emptiness_is_the_sign_of_y_along_the_normal((b, x, vs) in with_vectors(boundary_instance(), 1)) {
        let y = &vs[0];
        let along = inner(y, &b.offset(&x)).unwrap();
        let set = regular_coderivative(&b, &x, y, DEFAULT_TAU).unwrap();
        prop_assert_eq!(set.is_empty(), along > 0.0);
        let flipped = regular_coderivative(&b, &x, &-y, DEFAULT_TAU).unwrap();
        prop_assert_eq!(flipped.is_empty(), along < 0.0);
    }

    #[test]
    fn oracle_quotients_scale_linearly((b, x, vs) in with_vectors(any_instance(), 2), k in -3i32..6) {
        let alpha = 2f64.powi(k);
        let scheme = SamplingScheme { num_directions: 16, ..SamplingScheme::default() };
        let (y, z) = (&vs[0], &vs[1]);
        let base = limsup_quotient(&b, &x, y, z, &scheme).unwrap();
        let scaled = limsup_quotient(&b, &x, &y.scale(alpha), &z.scale(alpha), &scheme).unwrap();
        for (p, q) in base.per_radius_max.iter().zip(&scaled.per_radius_max) {
            // powers of two scale floating-point quotients exactly
            prop_assert_eq!(q.max_quotient, alpha * p.max_quotient);
        }
    }

    #[test]
    fn member_verdict_survives_positive_scaling((b, x, vs) in with_vectors(any_instance(), 1), alpha in 0.1..3.0f64) {
        let y = &vs[0];
        let set = regular_coderivative(&b, &x, y, DEFAULT_TAU).unwrap();
        let scheme = SamplingScheme { num_directions: 16, ..SamplingScheme::default() };
        for z in set.representatives() {
            let scaled = limsup_quotient(&b, &x, &y.scale(alpha), &z.scale(alpha), &scheme).unwrap();
            prop_assert_eq!(scaled.verdict, Verdict::ConsistentMember);
        }
    }

    #[test]
    fn graphical_values_are_contingent((b, x, vs) in with_vectors(any_instance(), 1)) {
        let y = &vs[0];
        let w = graphical(&b, &x, y).unwrap();
        let sched = ballproj::oracle::default_contingent_schedule();
        prop_assert!(contingent_member(&b, &x, y, &w, &sched).unwrap());
        let shifted = w.axpy(0.1, &Vector::unit_axis(b.dim(), 0));
        prop_assert!(!contingent_member(&b, &x, y, &shifted, &sched).unwrap());
    }

    #[test]
    fn difference_quotients_bracket_gateaux((b, x, vs) in with_vectors(any_instance(), 1)) {
        let u = &vs[0];
        let g = gateaux(&b, &x, u).unwrap();
        for k in 2..=6 {
            let t = 10f64.powi(-k);
            let err = difference_quotient(&b, &x, u, t).distance(&g);
            prop_assert!(err <= 10.0 * t * (1.0 + u.norm_squared()));
        }
    }
}
