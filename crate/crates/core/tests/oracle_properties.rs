use nisim::bounds::combined_report;
use nisim::distance::{cross_distance_bounds, distance_distribution, fwy_lower_bound};
use nisim::oracle::{
    evaluate, exhaustive_distance_extremes, exhaustive_extremes, Direction, Objective,
};
use nisim::BinaryCode;

const RHOS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[test]
fn single_code_minimum_equals_pair_minimum() {
    for n in 2..=3u32 {
        let points = 1usize << n;
        for m in 1..=points {
            let pair = exhaustive_distance_extremes(n, m, m).unwrap();
            // brute minimum of D(A) over single codes
            let single_min = (0u64..1 << points)
                .filter(|mask| mask.count_ones() as usize == m)
                .map(|mask| {
                    let a = BinaryCode::new(n, (0..points as u64).filter(|p| mask >> p & 1 == 1)).unwrap();
                    distance_distribution(&a, &a).unwrap().average()
                })
                .fold(f64::INFINITY, f64::min);
            assert!((pair.min_d.unwrap() - single_min).abs() < 1e-12, "n={n} m={m}");
            assert!((pair.max_d.unwrap() - (n as f64 - single_min)).abs() < 1e-12, "n={n} m={m}");
        }
    }
}

#[test]
fn distance_extremes_respect_cross_bounds() {
    for n in 2..=4u32 {
        let points = 1usize << n;
        for m in 1..=points {
            for k in [1, points / 2, points - 1, points] {
                let r = exhaustive_distance_extremes(n, m, k).unwrap();
                let b = cross_distance_bounds(n, m as f64 / points as f64, k as f64 / points as f64).unwrap();
                assert!(r.min_d.unwrap() >= b.lower - 1e-12, "n={n} m={m} k={k}");
                assert!(r.max_d.unwrap() <= b.upper + 1e-12, "n={n} m={m} k={k}");
                if 2 * m <= points && m == k {
                    let fwy = fwy_lower_bound(n, m as f64 / points as f64).unwrap();
                    assert!(r.min_d.unwrap() >= fwy - 1e-12);
                }
            }
        }
    }
}

#[test]
fn negation_duality_exhaustive() {
    for n in 1..=3u32 {
        let points = 1usize << n;
        for &rho in &RHOS {
            let obj = Objective::Collision { rho };
            for m in 1..points {
                for k in 1..=points {
                    let lo = exhaustive_extremes(n, m, k, obj).unwrap().min_q.unwrap();
                    let hi = exhaustive_extremes(n, points - m, k, obj).unwrap().max_q.unwrap();
                    let b = k as f64 / points as f64;
                    assert!((lo - (b - hi)).abs() < 1e-12, "n={n} m={m} k={k} rho={rho}");
                }
            }
        }
    }
}

#[test]
fn bounds_sandwich_exhaustive_optima() {
    for n in 1..=3u32 {
        let points = 1usize << n;
        for &rho in &RHOS {
            for m in 1..=points {
                for k in 1..=points {
                    let r = exhaustive_extremes(n, m, k, Objective::Collision { rho }).unwrap();
                    let rep = combined_report(m as f64 / points as f64, k as f64 / points as f64, rho).unwrap();
                    assert!(rep.combined_lb <= r.min_q.unwrap() + 1e-9, "n={n} m={m} k={k} rho={rho}");
                    assert!(r.max_q.unwrap() <= rep.combined_ub + 1e-9, "n={n} m={m} k={k} rho={rho}");
                }
            }
        }
    }
}

#[test]
fn max_is_monotone_in_blocklength() {
    // same marginals represented at successive blocklengths
    for &rho in &RHOS {
        let obj = Objective::Collision { rho };
        for (m2, k2) in [(1, 1), (1, 2), (2, 2), (1, 3), (3, 3)] {
            let mut prev = f64::NEG_INFINITY;
            for n in 2..=4u32 {
                let scale = 1usize << (n - 2);
                let r = exhaustive_extremes(n, m2 * scale, k2 * scale, obj).unwrap();
                let v = r.max_q.unwrap();
                assert!(v >= prev - 1e-12, "rho={rho} ({m2},{k2}) n={n}");
                prev = v;
            }
        }
    }
}

#[test]
fn witnesses_reevaluate_bit_for_bit() {
    for (n, m, k) in [(3, 3, 5), (4, 4, 4), (4, 6, 10)] {
        for obj in [Objective::Collision { rho: 0.4 }, Objective::Distance] {
            let r = exhaustive_extremes(n, m, k, obj).unwrap();
            for dir in [Direction::Max, Direction::Min] {
                let w = r.witness(dir).unwrap();
                assert_eq!((w.a.len(), w.b.len()), (m, k));
                let v = evaluate(&w.a, &w.b, obj).unwrap();
                assert!((v - r.value(dir).unwrap()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn exhaustive_is_deterministic() {
    let obj = Objective::Collision { rho: 0.9 };
    let x = exhaustive_extremes(4, 8, 8, obj).unwrap();
    let y = exhaustive_extremes(4, 8, 8, obj).unwrap();
    assert_eq!(x, y);
    assert_eq!(
        serde_json::to_string(&x).unwrap(),
        serde_json::to_string(&y).unwrap()
    );
}
