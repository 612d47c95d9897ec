use pslshade_core::benchmark::{suite_member, SearchBounds};
use pslshade_core::de::lpsr_next_size;
use pslshade_core::{Combo, ControlParams, InitMethod, Lshade, PsLshade, ScreeningConfig};

struct Trace {
    sizes: Vec<usize>,
    evaluations: usize,
    best: Vec<f64>,
}

fn lshade_trace(dim: usize, max_nfe: usize, seed: u64, function: usize) -> Trace {
    let f = suite_member(dim, 3, function, Combo::BiasShiftRotation).unwrap();
    let params = ControlParams::for_dimension(dim, max_nfe);
    let mut engine = Lshade::new(params.clone(), SearchBounds::standard(dim), seed).unwrap();
    let mut trace = Trace { sizes: Vec::new(), evaluations: 0, best: Vec::new() };
    loop {
        let state = engine.state();
        if state.initialized() {
            // Size at the start of this generation.
            trace.sizes.push(state.population().len());
            let cap = params.archive_capacity(state.population().len());
            assert!(state.archive().len() <= cap);
            trace.best.push(state.population().best().unwrap().fitness);
            let memory = state.memory();
            for k in 0..memory.len() {
                assert!(memory.f_slot(k) > 0.0 && memory.f_slot(k) <= 1.0);
                assert!(memory.cr_slot(k).is_none_or(|v| (0.0..=1.0).contains(&v)));
            }
        }
        let points = engine.ask();
        if points.is_empty() {
            break;
        }
        trace.evaluations += points.len();
        let values: Vec<f64> = points.iter().map(|p| f.evaluate(p)).collect();
        engine.tell(&values).unwrap();
    }
    trace
}

#[test]
fn budget_is_initial_plus_generation_sizes() {
    for (dim, mult) in [(5, 100), (10, 1000), (4, 333)] {
        let max_nfe = dim * mult;
        let t = lshade_trace(dim, max_nfe, 11, 3);
        let n_init = 18 * dim;
        let total: usize = n_init + t.sizes.iter().sum::<usize>();
        assert_eq!(t.evaluations, max_nfe.min(total));
        assert_eq!(t.evaluations, max_nfe);
    }
}

#[test]
fn population_follows_linear_reduction() {
    let dim = 10;
    let max_nfe = 10_000;
    let params = ControlParams::for_dimension(dim, max_nfe);
    let t = lshade_trace(dim, max_nfe, 5, 1);
    assert_eq!(t.sizes[0], params.n_init);
    let mut nfe = params.n_init;
    for w in t.sizes.windows(2) {
        nfe += w[0];
        assert_eq!(w[1], lpsr_next_size(&params, nfe));
    }
    assert!(t.sizes.iter().all(|&n| n >= params.n_min));
}

#[test]
fn best_fitness_never_worsens() {
    for function in [1, 5, 8] {
        let t = lshade_trace(10, 5_000, 2, function);
        assert!(t.best.windows(2).all(|w| w[1] <= w[0]), "F{function}");
    }
}

#[test]
fn same_seed_same_populations() {
    let dim = 6;
    let f = suite_member(dim, 1, 4, Combo::ShiftRotation).unwrap();
    let make = || Lshade::new(ControlParams::for_dimension(dim, 3_000), SearchBounds::standard(dim), 99).unwrap();
    let (mut a, mut b) = (make(), make());
    loop {
        assert_eq!(a.state().population().members, b.state().population().members);
        let (pa, pb) = (a.ask(), b.ask());
        assert_eq!(pa, pb);
        if pa.is_empty() {
            break;
        }
        let v: Vec<f64> = pa.iter().map(|p| f.evaluate(p)).collect();
        a.tell(&v).unwrap();
        b.tell(&v).unwrap();
    }
    let mut c = Lshade::new(ControlParams::for_dimension(dim, 3_000), SearchBounds::standard(dim), 100).unwrap();
    assert_ne!(c.ask(), make().ask());
}

#[test]
fn trials_stay_inside_bounds() {
    let dim = 5;
    let f = suite_member(dim, 1, 2, Combo::Shift).unwrap();
    let bounds = SearchBounds::standard(dim);
    let mut e = PsLshade::new(
        ControlParams::for_dimension(dim, 2_000),
        bounds.clone(),
        4,
        ScreeningConfig::with_trials(4),
    )
    .unwrap();
    let mut seen = 0;
    loop {
        if let Some(s) = e.pending_screening() {
            for set in &s.sets {
                assert!(set.f.iter().all(|&v| v > 0.0 && v <= 1.0));
                assert!((0.0..=1.0).contains(&set.cr));
                assert!(set.trials.iter().all(|t| bounds.contains(t)));
            }
        }
        let points = e.ask();
        if points.is_empty() {
            break;
        }
        seen += points.len();
        assert!(points.iter().all(|p| bounds.contains(p)));
        let v: Vec<f64> = points.iter().map(|p| f.evaluate(p)).collect();
        e.tell(&v).unwrap();
    }
    assert_eq!(seen, 2_000);
}

#[test]
fn screened_run_spends_exact_budget() {
    let dim = 10;
    let f = suite_member(dim, 1, 6, Combo::BiasShift).unwrap();
    for n_s in [1, 3, 10] {
        let mut e = PsLshade::new(
            ControlParams::for_dimension(dim, 2_345),
            SearchBounds::standard(dim),
            7,
            ScreeningConfig::with_trials(n_s),
        )
        .unwrap();
        let mut used = 0;
        loop {
            let points = e.ask();
            if points.is_empty() {
                break;
            }
            used += points.len();
            let v: Vec<f64> = points.iter().map(|p| f.evaluate(p)).collect();
            e.tell(&v).unwrap();
        }
        assert_eq!(used, 2_345);
        assert_eq!(e.state().nfe(), 2_345);
    }
}

#[test]
fn budget_equal_to_initial_population_runs_no_generation() {
    let dim = 3;
    let params = ControlParams::for_dimension(dim, 54);
    let f = suite_member(dim, 1, 1, Combo::None).unwrap();
    let mut e = Lshade::with_init(params, SearchBounds::standard(dim), 1, InitMethod::LatinHypercube).unwrap();
    let first = e.ask();
    assert_eq!(first.len(), 54);
    let v: Vec<f64> = first.iter().map(|p| f.evaluate(p)).collect();
    e.tell(&v).unwrap();
    assert!(e.ask().is_empty());
    assert_eq!(e.state().population().generation, 0);
    assert!(e.is_done());
}

#[test]
fn non_finite_fitness_is_an_error() {
    let dim = 2;
    let mut e = Lshade::new(ControlParams::for_dimension(dim, 400), SearchBounds::standard(dim), 1).unwrap();
    let mut v = vec![1.0; e.ask().len()];
    v[3] = f64::NAN;
    assert!(e.tell(&v).is_err());
}
