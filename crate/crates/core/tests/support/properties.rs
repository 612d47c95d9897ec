//! Property checks shared by the property suite and the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::{TestCaseError, TestRunner};
use pslshade_core::benchmark::Combo;
use pslshade_core::de::{lpsr_next_size, sample_cr, sample_f, ControlParams, ExternalArchive, ParameterMemory};
use pslshade_core::metrics::{hyper_volume, kendall_tau, score_pipeline, CellKey, CellResult};
use pslshade_core::prescreen::{feature_count, feature_map, screen, MetaModel, SampleArchive, SIMILARITY_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generated cases per property.
pub const CASES: u32 = 1000;

pub type Outcome = Result<(), String>;

fn check<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome {
    let config = ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    };
    TestRunner::new(config).run(&strategy, test).map_err(|e| e.to_string())
}

/// `n_init - (n_init - n_min) * nfe / max_nfe`, rounded half up, in integers.
fn exact_lpsr(n_init: usize, n_min: usize, max_nfe: usize, nfe: usize) -> usize {
    let scaled = 2 * (n_init * max_nfe) as u128 - 2 * ((n_init - n_min) * nfe) as u128;
    let q = scaled / (2 * max_nfe as u128);
    let r = scaled % (2 * max_nfe as u128);
    (q + u128::from(r >= max_nfe as u128)) as usize
}

/// Kendall tau-b from tie-group sizes.
fn tau_by_definition(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len();
    let n0 = (n * (n - 1) / 2) as f64;
    let tie_pairs = |v: &[f64]| -> f64 {
        let mut sorted = v.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut total = 0.0;
        let mut run = 1usize;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                total += (run * (run - 1) / 2) as f64;
                run = 1;
            }
        }
        total + (run * (run - 1) / 2) as f64
    };
    let mut score = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            if a[i] != a[j] && b[i] != b[j] {
                score += ((a[i] - a[j]).signum() * (b[i] - b[j]).signum()) as i64;
            }
        }
    }
    let denom = ((n0 - tie_pairs(a)) * (n0 - tie_pairs(b))).sqrt();
    (denom > 0.0).then(|| score as f64 / denom)
}

fn points(max_n: usize, max_d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_d).prop_flat_map(move |d| prop::collection::vec(prop::collection::vec(-50.0..50.0f64, d), 1..=max_n))
}

pub fn lpsr_matches_linear_schedule() -> Outcome {
    check(
        (4usize..20, 0usize..400, 0usize..200_000, 0.0..=1.0f64),
        |(n_min, extra, budget_extra, frac)| {
            let n_init = n_min + extra;
            let max_nfe = n_init + budget_extra;
            let params = ControlParams {
                n_init,
                n_min,
                max_nfe,
                ..ControlParams::for_dimension(10, max_nfe)
            };
            let nfe = (frac * max_nfe as f64) as usize;
            let size = lpsr_next_size(&params, nfe);
            prop_assert_eq!(size, exact_lpsr(n_init, n_min, max_nfe, nfe));
            prop_assert!(size >= n_min && size <= n_init);
            prop_assert!(lpsr_next_size(&params, nfe + 1) <= size);
            prop_assert_eq!(lpsr_next_size(&params, max_nfe), n_min);
            Ok(())
        },
    )
}

pub fn external_archive_respects_capacity() -> Outcome {
    check(
        (0usize..30, 0usize..100, 0usize..40, any::<u64>()),
        |(cap, pushes, shrink, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut archive = ExternalArchive::new(cap);
            for k in 0..pushes {
                archive.push(vec![k as f64], &mut rng);
                prop_assert!(archive.len() <= cap);
            }
            prop_assert_eq!(archive.len(), pushes.min(cap));
            archive.resize(shrink, &mut rng);
            prop_assert_eq!(archive.len(), pushes.min(cap).min(shrink));
            Ok(())
        },
    )
}

pub fn sample_archive_is_bounded_and_duplicate_free() -> Outcome {
    check(
        (1usize..25, prop::collection::vec((0u8..12, 0u8..12, 0u8..40), 1..120)),
        |(cap, raw)| {
            let mut archive = SampleArchive::new(cap);
            let mut worst_when_full = f64::INFINITY;
            for (a, b, f) in raw {
                archive.insert(&[a as f64, b as f64 * 0.5], f as f64);
                prop_assert!(archive.len() <= cap);
                let pos = archive.positions();
                let fit = archive.fitness();
                for i in 0..pos.len() {
                    for j in i + 1..pos.len() {
                        let same = pos[i].iter().zip(&pos[j]).all(|(x, y)| (x - y).abs() <= SIMILARITY_TOL);
                        prop_assert!(!same);
                        prop_assert!((fit[i] - fit[j]).abs() > SIMILARITY_TOL);
                    }
                }
                if archive.len() == cap {
                    let worst = archive.worst().unwrap().1;
                    prop_assert!(worst <= worst_when_full);
                    worst_when_full = worst;
                }
            }
            Ok(())
        },
    )
}

pub fn feature_length_is_model_size() -> Outcome {
    check((1usize..80, -100.0..100.0f64), |(d, v)| {
        let len = feature_map(&vec![v; d]).len();
        prop_assert_eq!(len, (d * d + 7 * d) / 2 + 1);
        prop_assert_eq!(len, feature_count(d));
        Ok(())
    })
}

pub fn rank_sums_are_conserved() -> Outcome {
    check(
        (1usize..6, 1usize..7, 1usize..4, prop::collection::vec(0u8..4, 6 * 7 * 4)),
        |(algs, cells, reps, table)| {
            let mut results = Vec::new();
            for a in 0..algs {
                for c in 0..cells {
                    results.push(CellResult {
                        algorithm: format!("a{a}"),
                        cell: CellKey { function: c + 1, combo: Combo::None, dim: 10 },
                        final_errors: (0..reps).map(|r| table[(a * 7 + c) * 4 + r] as f64).collect(),
                    });
                }
            }
            let board = score_pipeline(&results).unwrap();
            let total: f64 = board.rows.iter().map(|r| r.sr).sum();
            let expected = 0.5 * cells as f64 * (algs * (algs + 1)) as f64 / 2.0;
            prop_assert!((total - expected).abs() < 1e-9);
            let best1 = board.rows.iter().map(|r| r.score1).fold(0.0, f64::max);
            let best2 = board.rows.iter().map(|r| r.score2).fold(0.0, f64::max);
            prop_assert_eq!(best1, 50.0);
            prop_assert_eq!(best2, 50.0);
            // A zero minimum sends every other algorithm's share to exactly 0.
            let sne_min = board.rows.iter().map(|r| r.sne).fold(f64::INFINITY, f64::min);
            for r in &board.rows {
                prop_assert!(r.score1 >= 0.0 && r.score1 <= 50.0);
                prop_assert!(r.score2 > 0.0 && r.score2 <= 50.0);
                if sne_min > 0.0 {
                    prop_assert!(r.score1 > 0.0);
                }
                prop_assert!((r.score - r.score1 - r.score2).abs() < 1e-12);
            }
            Ok(())
        },
    )
}

pub fn hyper_volume_is_bounding_box() -> Outcome {
    check(
        (points(10, 5), prop::collection::vec(-50.0..50.0f64, 5), 0usize..10),
        |(pts, extra, rot)| {
            let d = pts[0].len();
            let mut expected = 1.0;
            for k in 0..d {
                let mut column: Vec<f64> = pts.iter().map(|p| p[k]).collect();
                column.sort_by(f64::total_cmp);
                expected *= column[column.len() - 1] - column[0];
            }
            let hv = hyper_volume(&pts);
            prop_assert!((hv - expected).abs() <= 1e-12 * expected.abs().max(1.0));
            prop_assert!(hv >= 0.0);

            let mut rotated = pts.clone();
            rotated.rotate_left(rot % pts.len());
            prop_assert_eq!(hyper_volume(&rotated), hv);

            let mut grown = pts.clone();
            grown.push(extra[..d].to_vec());
            prop_assert!(hyper_volume(&grown) >= hv);
            Ok(())
        },
    )
}

pub fn kendall_matches_definition() -> Outcome {
    check(prop::collection::vec((0u8..5, 0u8..5), 2..=8), |pairs| {
        let a: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        match (kendall_tau(&a, &b), tau_by_definition(&a, &b)) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-12, "{} vs {}", x, y),
            (None, None) => {}
            (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
        }
        Ok(())
    })
}

pub fn screening_ignores_positive_scale() -> Outcome {
    check((any::<u64>(), 1e-3..1e3f64), |(seed, factor)| {
        let dim = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<Vec<f64>> = (0..2 * feature_count(dim))
            .map(|_| (0..dim).map(|_| rng.random_range(-10.0..10.0)).collect())
            .collect();
        let ys: Vec<f64> = xs.iter().map(|x| x[0] * x[0] - 3.0 * x[1] + x[2].abs()).collect();
        let model = MetaModel::fit_samples(&xs, &ys, dim);
        let trials = xs[..7].to_vec();
        prop_assert_eq!(screen(&trials, &model), screen(&trials, &model.scaled(factor)));
        Ok(())
    })
}

pub fn sampled_parameters_stay_in_range() -> Outcome {
    check((0.01..=1.0f64, 0.0..=1.0f64, any::<u64>()), |(m_f, m_cr, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let f = sample_f(m_f, &mut rng);
            prop_assert!(f > 0.0 && f <= 1.0);
            let cr = sample_cr(Some(m_cr), &mut rng);
            prop_assert!((0.0..=1.0).contains(&cr));
        }
        prop_assert_eq!(sample_cr(None, &mut rng), 0.0);
        Ok(())
    })
}

pub fn memory_stays_in_range_and_terminal_is_permanent() -> Outcome {
    let success = (0.01..=1.0f64, 0.0..=1.0f64, 0.0..10.0f64, any::<bool>());
    check(
        prop::collection::vec(prop::collection::vec(success, 0..6), 1..30),
        |updates| {
            let mut memory = ParameterMemory::new(5, 0.5, 0.5);
            let mut terminal = [false; 5];
            for batch in updates {
                let s_f: Vec<(f64, f64)> = batch.iter().map(|&(f, _, w, _)| (f, w + 1e-3)).collect();
                let s_cr: Vec<(f64, f64)> = batch
                    .iter()
                    .map(|&(_, cr, w, zero)| (if zero { 0.0 } else { cr }, w + 1e-3))
                    .collect();
                memory.update(&s_f, &s_cr);
                for (k, seen) in terminal.iter_mut().enumerate() {
                    prop_assert!(memory.f_slot(k) > 0.0 && memory.f_slot(k) <= 1.0);
                    if let Some(v) = memory.cr_slot(k) {
                        prop_assert!((0.0..=1.0).contains(&v));
                    }
                    if *seen {
                        prop_assert!(memory.is_terminal(k));
                    }
                    *seen = memory.is_terminal(k);
                }
            }
            Ok(())
        },
    )
}

/// Every property, by name.
pub type Property = (&'static str, fn() -> Outcome);

pub const ALL: &[Property] = &[
    ("lpsr_matches_linear_schedule", lpsr_matches_linear_schedule),
    ("external_archive_respects_capacity", external_archive_respects_capacity),
    ("sample_archive_is_bounded_and_duplicate_free", sample_archive_is_bounded_and_duplicate_free),
    ("feature_length_is_model_size", feature_length_is_model_size),
    ("rank_sums_are_conserved", rank_sums_are_conserved),
    ("hyper_volume_is_bounding_box", hyper_volume_is_bounding_box),
    ("kendall_matches_definition", kendall_matches_definition),
    ("screening_ignores_positive_scale", screening_ignores_positive_scale),
    ("sampled_parameters_stay_in_range", sampled_parameters_stay_in_range),
    ("memory_stays_in_range_and_terminal_is_permanent", memory_stays_in_range_and_terminal_is_permanent),
];
