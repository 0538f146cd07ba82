use nisim::bounds::{
    combined_report, hc_bounds, maximal_correlation_bounds, normalize_instance, theorem1_bounds,
    HcOptimizerConfig,
};
use nisim::cube::subcube;
use nisim::nis::collision_prob;
use nisim::BinaryCode;
use proptest::prelude::*;

fn dense_grid() -> impl Iterator<Item = (f64, f64, f64)> {
    let ms: Vec<f64> = (1..=25).map(|k| k as f64 / 50.0).collect();
    let rhos: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0).collect();
    let mut out = Vec::new();
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i..] {
            for &r in &rhos {
                out.push((a, b, r));
            }
        }
    }
    out.into_iter()
}

fn raw_mc_ub(a: f64, b: f64, rho: f64) -> f64 {
    a * b + (a * (1.0 - a) * b * (1.0 - b)).sqrt() * rho
}

fn raw_mc_lb(a: f64, b: f64, rho: f64) -> f64 {
    a * b - (a * (1.0 - a) * b * (1.0 - b)).sqrt() * rho
}

#[test]
fn upsilon1_ub_never_exceeds_mc_ub() {
    for (a, b, rho) in dense_grid() {
        let u = theorem1_bounds(a, b, rho).unwrap();
        let (_, mc_ub) = maximal_correlation_bounds(a, b, rho).unwrap();
        assert!(u.upsilon1_ub <= mc_ub + 1e-12, "({a}, {b}, {rho})");
        // strict against the unclamped correlation bound away from a = b = 1/2
        let raw = raw_mc_ub(a, b, rho);
        if (a, b) != (0.5, 0.5) && !(a == b && rho == 1.0) {
            assert!(u.upsilon1_ub < raw, "strict at ({a}, {b}, {rho})");
        } else {
            assert!((u.upsilon1_ub - raw).abs() < 1e-12);
        }
    }
}

#[test]
fn upsilon2_lb_at_least_mc_lb_when_symmetric() {
    for (a, b, rho) in dense_grid() {
        if a == b {
            let u = theorem1_bounds(a, b, rho).unwrap();
            let (mc_lb, _) = maximal_correlation_bounds(a, b, rho).unwrap();
            assert!(u.upsilon2_lb >= mc_lb - 1e-12, "symmetric ({a}, {rho})");
        }
    }
}

/// With `b = 1/2`,
/// `Υ2_LB − mc = (ρ/2)(√(aā) − √(a/2)) − (1/2 − √(a/2)) ρ²/2`,
/// so the comparison flips at `ρ* = (√(aā) − √(a/2)) / (1/2 − √(a/2))`.
#[test]
fn upsilon2_lb_versus_mc_lb_at_half() {
    let mut below = 0;
    let mut above = 0;
    for (a, b, rho) in dense_grid() {
        if b != 0.5 || a == 0.5 {
            continue;
        }
        let u = theorem1_bounds(a, b, rho).unwrap();
        let (root_a, root_half) = ((a * (1.0 - a)).sqrt(), (a / 2.0).sqrt());
        // the second lower family before clamping at 0, with a + b − 2ab = 1/2
        let raw = a / 2.0 - root_half * rho / 2.0 - (0.5 - root_half) * rho * rho / 2.0;
        assert!((u.upsilon2_lb - raw.max(0.0)).abs() < 1e-12);
        let diff = raw - raw_mc_lb(a, b, rho);
        let closed = rho / 2.0 * (root_a - root_half) - (0.5 - root_half) * rho * rho / 2.0;
        assert!((diff - closed).abs() < 1e-12, "({a}, {rho}): {diff} vs {closed}");
        let threshold = (root_a - root_half) / (0.5 - root_half);
        if rho > threshold + 1e-9 {
            assert!(diff < 0.0);
            below += 1;
        } else if rho < threshold - 1e-9 {
            assert!(diff > 0.0);
            above += 1;
        }
    }
    // both orders occur; at ρ = 1 the correlation bound always wins
    assert!(below > 0 && above > 0, "{below} {above}");
    for k in 1..25 {
        let a = k as f64 / 50.0;
        // before clamping: a/2 − 1/4 against a/2 − √(aā)/2
        assert!(a / 2.0 - 0.25 <= raw_mc_lb(a, 0.5, 1.0) + 1e-12);
        assert!(theorem1_bounds(a, 0.5, 1.0).unwrap().upsilon2_lb == 0.0);
    }
}

#[test]
fn lower_families_do_not_dominate_each_other() {
    let mut lb1_above = false;
    let mut lb2_above = false;
    for (a, b, rho) in dense_grid() {
        let u = theorem1_bounds(a, b, rho).unwrap();
        lb1_above |= u.upsilon1_lb > u.upsilon2_lb + 1e-9;
        lb2_above |= u.upsilon2_lb > u.upsilon1_lb + 1e-9;
        assert!(u.lower() <= u.upper() + 1e-12);
    }
    assert!(lb1_above && lb2_above, "lower families: {lb1_above} {lb2_above}");
}

/// On the normalized domain `a ≤ b ≤ 1/2`, `ρ ≥ 0` the first upper family is
/// never looser than the second; they meet on the diagonal.
#[test]
fn upper_families_ordered_on_normalized_domain() {
    for (a, b, rho) in dense_grid() {
        let u = theorem1_bounds(a, b, rho).unwrap();
        assert!(u.upsilon1_ub <= u.upsilon2_ub + 1e-12, "({a}, {b}, {rho})");
        if a == b {
            assert!((u.upsilon1_ub - u.upsilon2_ub).abs() < 1e-12);
        }
    }
}

/// Compared with the unclamped correlation bounds, so that the check has
/// content where those fall outside `[0, a]`.
#[test]
fn hc_inside_mc_on_symmetric_grid() {
    let cfg = HcOptimizerConfig::default();
    for rho in [0.1, 0.5, 0.9] {
        for k in 1..=10 {
            let a = 0.05 * k as f64;
            let hc = hc_bounds(a, a, rho, &cfg).unwrap();
            let (mc_lb, mc_ub) = (raw_mc_lb(a, a, rho), raw_mc_ub(a, a, rho));
            assert!(hc.ub <= mc_ub + 1e-12, "ub a={a} rho={rho}");
            assert!(hc.lb >= mc_lb - 1e-12, "lb a={a} rho={rho}");
        }
    }
}

fn code_from_mask(n: u32, mask: u64) -> Option<BinaryCode> {
    let words: Vec<u64> = (0..1u64 << n).filter(|p| mask >> p & 1 == 1).collect();
    (!words.is_empty()).then(|| BinaryCode::new(n, words).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The recorded affine map reproduces `q` of explicit codes from the
    /// `q` of the reduced pair.
    #[test]
    fn normalization_map_matches_explicit_codes(
        ma in 1u64..65535, mb in 1u64..65535, rho in -1.0f64..=1.0
    ) {
        let n = 4;
        let (a, b) = (code_from_mask(n, ma).unwrap(), code_from_mask(n, mb).unwrap());
        let norm = normalize_instance(a.density(), b.density(), rho).unwrap();
        // rebuild the reduced pair by following the recorded steps
        let (mut x, mut y, mut r) = (a.clone(), b.clone(), rho);
        for step in &norm.record.steps {
            match step {
                nisim::bounds::Reduction::NegateX => { x = x.star(); r = -r; }
                nisim::bounds::Reduction::ComplementF => x = x.complement().unwrap(),
                nisim::bounds::Reduction::ComplementG => y = y.complement().unwrap(),
                nisim::bounds::Reduction::Swap => std::mem::swap(&mut x, &mut y),
            }
        }
        prop_assert!((x.density() - norm.a).abs() < 1e-15 && (y.density() - norm.b).abs() < 1e-15);
        prop_assert!((r - norm.rho).abs() < 1e-15);
        let q_orig = collision_prob(&a, &b, rho).unwrap();
        let q_norm = collision_prob(&x, &y, r).unwrap();
        prop_assert!((norm.record.map_value(q_norm) - q_orig).abs() < 1e-12);
    }

    /// Every family brackets `q` of arbitrary explicit codes.
    #[test]
    fn combined_report_brackets_explicit_codes(
        ma in 1u64..255, mb in 1u64..255, step in -9i32..=9
    ) {
        let rho = step as f64 / 10.0;
        let (a, b) = (code_from_mask(3, ma).unwrap(), code_from_mask(3, mb).unwrap());
        let q = collision_prob(&a, &b, rho).unwrap();
        let r = combined_report(a.density(), b.density(), rho).unwrap();
        for (name, e) in r.lower_entries() {
            prop_assert!(e.value <= q + 1e-9, "{} = {} > q = {}", name, e.value, q);
        }
        for (name, e) in r.upper_entries() {
            prop_assert!(e.value >= q - 1e-9, "{} = {} < q = {}", name, e.value, q);
        }
    }
}

#[test]
fn double_complement_example_matches_codes() {
    // (3/4, 3/4) reduces to (1/4, 1/4) with q = a + b − 1 + q'
    let small = subcube(2, 2).unwrap();
    let big = small.complement().unwrap();
    let q = collision_prob(&big, &big, 0.5).unwrap();
    let q_small = collision_prob(&small, &small, 0.5).unwrap();
    assert!((q - (0.5 + q_small)).abs() < 1e-12);
    let r = combined_report(0.75, 0.75, 0.5).unwrap();
    assert!(r.combined_lb <= q + 1e-12 && q <= r.combined_ub + 1e-12);
    // the subcube pair attains the reduced upper bound, so the big pair does too
    assert!((r.combined_ub - q).abs() < 1e-12);
}
