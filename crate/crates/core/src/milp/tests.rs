use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::construction::Engine;
use crate::fixtures::{figure_one_instance, figure_one_solution, type_one};
use crate::model::{InstanceParts, Metrics, SensorFlow, SensorId, SensorType};
use crate::validate::validate;

fn tiny(width: usize, height: usize, horizon: usize, sinks: usize) -> Instance {
    let n = width * height;
    Instance::new(InstanceParts {
        width,
        height,
        metrics: Metrics::default(),
        types: vec![SensorType::sink((10.0, 15.0)), type_one(1.0, 1.5, 19200.0)],
        costs: (0..n).map(|j| vec![10.0 + j as f64, 2.0 + (j % 3) as f64]).collect(),
        coverage_req: vec![1; n],
        alpha: 1,
        horizon,
        budget: 40.0,
        sink_count: sinks,
    })
    .unwrap()
}

fn no_cut() -> ExportOptions {
    ExportOptions {
        alpha_cut: false,
        ..ExportOptions::default()
    }
}

#[test]
fn variable_count_matches_registry() {
    let inst = tiny(2, 2, 2, 1);
    let model = export_model(&inst, &ExportOptions::default()).unwrap();
    // 8 + 8 + 32 + 32 + 32 + 2 + 1 + 64
    assert_eq!(variable_count(4, 1, 2), 179);
    assert_eq!(model.registry.len(), 179);
    let fig = figure_one_instance();
    assert_eq!(Registry::new(&fig).len(), variable_count(16, 2, 2));
    assert_eq!(model.m1, 24.0 * 3.0);
    assert_eq!(model.m2, 24.0 * 4.0);
}

#[test]
fn row_families_have_expected_sizes() {
    let inst = tiny(2, 2, 2, 1);
    let model = export_model(&inst, &ExportOptions::default()).unwrap();
    let count = |f| model.rows_of(f).count();
    let (n, nk, t) = (4, 4, 2);
    assert_eq!(count(RowFamily::Lifetime), t);
    assert_eq!(count(RowFamily::Coverage), n * t);
    assert_eq!(count(RowFamily::ActivityLinking), 2 * nk * t);
    assert_eq!(count(RowFamily::Connectivity), nk * t);
    assert_eq!(count(RowFamily::SinkAssignment), (2 * n + 1) * nk * t);
    assert_eq!(count(RowFamily::FlowBalance), nk * t);
    assert_eq!(count(RowFamily::SinkFlow), n * t);
    assert_eq!(count(RowFamily::Energy), nk);
    assert_eq!(count(RowFamily::OutflowCut), nk * t);
    assert_eq!(count(RowFamily::Budget), 1);
    assert_eq!(count(RowFamily::SinkCount), 1);
    let without = export_model(&inst, &no_cut()).unwrap();
    assert_eq!(without.row_count() + nk * t, model.row_count());
}

#[test]
fn single_period_lifetime_row() {
    let inst = tiny(2, 1, 1, 1);
    let model = export_model(&inst, &ExportOptions::default()).unwrap();
    let text = model.to_lp();
    assert!(text.contains(" life_1: n_1 - L >= 0\n"), "{text}");
    assert!(text.contains(" 0 <= L <= 1\n"));
    let lp: Vec<&Row> = model.rows_of(RowFamily::Lifetime).collect();
    assert_eq!(lp.len(), 1);
}

#[test]
fn lp_layout() {
    let inst = tiny(2, 2, 2, 1);
    let text = export_model(&inst, &ExportOptions::default()).unwrap().to_lp();
    let sections: Vec<&str> = text
        .lines()
        .filter(|l| ["Maximize", "Subject To", "Bounds", "General", "Binary", "End"].contains(l))
        .collect();
    assert_eq!(sections, ["Maximize", "Subject To", "Bounds", "General", "Binary", "End"]);
    assert!(text.contains(" obj: L\n"));
    assert!(text.lines().all(|l| l.len() <= 78 || !l.contains(' ')));
    assert!(text.contains(" budget: 10 x_1_0 + 2 x_1_1 + 11 x_2_0 + 3 x_2_1"));
    assert!(text.contains(" sinks: x_1_0 + x_2_0 + x_3_0 + x_4_0 = 1\n"));
    assert!(text.contains(" lin1_1_1_2_1_1: y_1_1_2_1_1 - 72 w_1_1_2_1_1 <= 0\n"));
    assert!(text.contains(" lin4_1_1_1_1_1: u_1_1_1_1 + w_1_1_1_0_1 - x_1_0 <= 1\n"));
}

#[test]
fn export_is_deterministic() {
    let inst = figure_one_instance();
    let a = export_model(&inst, &ExportOptions::default()).unwrap().to_lp();
    let b = export_model(&inst.clone(), &ExportOptions::default()).unwrap().to_lp();
    assert_eq!(a, b);
    assert_eq!(file_name(&inst), "spsrc_N16_K2_T2.lp");
}

#[test]
fn row_cap_refuses() {
    let inst = figure_one_instance();
    let opts = ExportOptions {
        row_cap: 1000,
        ..ExportOptions::default()
    };
    assert_eq!(export_model(&inst, &opts).unwrap_err(), ExportError::TooLarge { cap: 1000 });
}

#[test]
fn fixed_sinks_become_bounds() {
    let inst = figure_one_instance();
    let opts = ExportOptions {
        fixed_sinks: Some(vec![7, 13]),
        ..ExportOptions::default()
    };
    let text = export_model(&inst, &opts).unwrap().to_lp();
    assert!(text.contains(" x_8_0 = 1\n"));
    assert!(text.contains(" x_1_0 = 0\n"));
    let bad = ExportOptions {
        fixed_sinks: Some(vec![7]),
        ..ExportOptions::default()
    };
    assert!(matches!(export_model(&inst, &bad), Err(ExportError::SinkCount { .. })));
    let outside = ExportOptions {
        fixed_sinks: Some(vec![7, 99]),
        ..ExportOptions::default()
    };
    assert_eq!(export_model(&inst, &outside).unwrap_err(), ExportError::BadSink(100));
}

#[test]
fn example_schedule_satisfies_every_row() {
    let inst = figure_one_instance();
    let sol = figure_one_solution();
    let model = export_model(&inst, &ExportOptions::default()).unwrap();
    let bad = check_solution(&model, &inst, &sol);
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn example_imports_from_value_listing() {
    let inst = figure_one_instance();
    let text = "\
L 2
n_1 1
n_2 1
x_8_0 1
x_14_0 1
x_1_1 1
x_2_1 1
x_10_1 1
x_16_1 1
x_3_2 1
x_4_2 1
x_11_2 1
x_15_2 1
z_1_1_1 1
z_10_1_1 1
z_3_2_1 1
z_15_2_1 1
u_8_1_1_1 1
u_8_3_2_1 1
u_14_10_1_1 1
u_14_15_2_1 1
y_1_1_3_2_1 24
g_3_2_8_1 48
g_10_1_14_1 24
g_15_2_14_1 24
z_2_1_2 1
z_10_1_2 1
z_16_1_2 1
z_4_2_2 1
z_11_2_2 1
u_8_2_1_2 1
u_8_4_2_2 1
u_14_10_1_2 1
u_14_16_1_2 1
u_14_11_2_2 1
y_2_1_4_2_2 24
g_4_2_8_2 48
g_10_1_14_2 24
g_16_1_14_2 24
g_11_2_14_2 24
";
    let sol = import_solution(text, &inst).unwrap();
    assert_eq!(sol.lifetime, 2);
    assert!(validate(&inst, &sol).feasible);
    assert_eq!(sol, figure_one_solution());
}

#[test]
fn import_errors() {
    let inst = figure_one_instance();
    assert!(matches!(
        import_solution("L 1\nq_1 1\n", &inst),
        Err(ImportError::UnknownVariable { line: 2, .. })
    ));
    assert!(matches!(
        import_solution("z_1_1_1 0.5\n", &inst),
        Err(ImportError::NotIntegral { line: 1, .. })
    ));
    assert!(import_solution("z_1_1_1 0.9999999\n", &inst).is_ok());
    assert!(matches!(import_solution("L\n", &inst), Err(ImportError::Malformed { .. })));
    // continuous values may be fractional
    assert!(import_solution("y_1_1_3_2_1 0.5\n", &inst).is_ok());
}

#[test]
fn round_trip_through_value_listing() {
    let inst = figure_one_instance();
    let sol = figure_one_solution();
    let reg = Registry::new(&inst);
    let values = assign(&reg, &inst, &sol);
    let text = write_values(&reg, &values);
    assert_eq!(import_solution(&text, &inst).unwrap(), sol);
    assert_eq!(parse_values(&text, &reg).unwrap(), values);

    for seed in 0..3 {
        let inst = tiny(3, 2, 3, 1);
        let sol = Engine::Dh.run(&inst, &[seed]).solution;
        let reg = Registry::new(&inst);
        let text = write_values(&reg, &assign(&reg, &inst, &sol));
        assert_eq!(import_solution(&text, &inst).unwrap(), sol);
    }
}

fn mutate(rng: &mut ChaCha8Rng, inst: &Instance, sol: &mut Solution) {
    let t = rng.random_range(0..sol.horizon);
    let plan = &mut sol.periods[t];
    match rng.random_range(0..9) {
        0 if !plan.active.is_empty() => {
            let i = rng.random_range(0..plan.active.len());
            plan.active.remove(i);
        }
        1 if !plan.assignments.is_empty() => {
            let i = rng.random_range(0..plan.assignments.len());
            plan.assignments.remove(i);
        }
        2 if !plan.sink_flows.is_empty() => {
            let i = rng.random_range(0..plan.sink_flows.len());
            plan.sink_flows[i].amount += 1.0;
        }
        3 if !sol.deployed.is_empty() => {
            let i = rng.random_range(0..sol.deployed.len());
            sol.deployed.remove(i);
        }
        4 => sol.period_on[t] = !sol.period_on[t],
        5 => sol.lifetime += 1,
        6 => {
            let node = rng.random_range(0..inst.nodes());
            let kind = rng.random_range(0..=inst.kinds());
            sol.deployed.push(SensorId::new(node, kind));
        }
        7 if !plan.assignments.is_empty() => {
            let i = rng.random_range(0..plan.assignments.len());
            plan.assignments[i].sink = rng.random_range(0..inst.nodes());
        }
        8 if plan.active.len() >= 2 => {
            let a = plan.active[rng.random_range(0..plan.active.len())];
            let b = plan.active[rng.random_range(0..plan.active.len())];
            plan.sensor_flows.push(SensorFlow { from: a, to: b, amount: 24.0 });
        }
        _ => {}
    }
    sol.normalize();
}

fn assert_agree(inst: &Instance, sol: &Solution, model: &ExportModel) -> bool {
    let report = validate(inst, sol);
    let rows = check_solution(model, inst, sol);
    assert_eq!(report.feasible, rows.is_empty(), "validator: {report}\nrows: {rows:?}\n{sol:?}");
    report.feasible
}

#[test]
fn validator_and_rows_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fig = figure_one_instance();
    let fig_model = export_model(&fig, &no_cut()).unwrap();
    let mut cases: Vec<(Instance, Solution)> = vec![(fig.clone(), figure_one_solution())];
    for sinks in [[0usize, 5], [2, 3], [1, 4]] {
        let inst = tiny(3, 2, 3, 2);
        for engine in [Engine::Ch, Engine::Dh] {
            cases.push((inst.clone(), engine.run(&inst, &sinks).solution));
        }
    }
    let mut verdicts = [0usize; 2];
    for (inst, base) in &cases {
        let model = if inst == &fig {
            fig_model.clone()
        } else {
            export_model(inst, &no_cut()).unwrap()
        };
        assert!(assert_agree(inst, base, &model));
        for _ in 0..60 {
            let mut sol = base.clone();
            for _ in 0..rng.random_range(1..3) {
                mutate(&mut rng, inst, &mut sol);
            }
            verdicts[usize::from(assert_agree(inst, &sol, &model))] += 1;
        }
    }
    assert!(verdicts[0] > 100 && verdicts[1] > 5, "{verdicts:?}");
    assert!(cases.iter().any(|(_, s)| s.lifetime > 0));
}
