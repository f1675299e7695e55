mod common;

use std::time::Instant;

use common::data;
use wsn_core::fixtures::{figure_one_instance, figure_one_solution, line_instance};
use wsn_core::milp::{self, ExportOptions};
use wsn_core::model::{instance_from_json, instance_to_json, solution_from_json, solution_to_json, Instance, SensorId};
use wsn_core::validate::{validate, Family};

#[test]
fn example_files_match_fixtures() {
    let inst = instance_from_json(&data("figure1_instance.json")).unwrap();
    let sol = solution_from_json(&data("figure1_solution.json")).unwrap();
    assert_eq!(inst, figure_one_instance());
    assert_eq!(sol, figure_one_solution());
    assert_eq!(instance_to_json(&inst), data("figure1_instance.json"));
    assert_eq!(solution_to_json(&sol), data("figure1_solution.json"));
}

#[test]
fn example_schedule_validates() {
    let started = Instant::now();
    let inst = instance_from_json(&data("figure1_instance.json")).unwrap();
    let sol = solution_from_json(&data("figure1_solution.json")).unwrap();
    let report = validate(&inst, &sol);
    assert!(report.feasible, "{report}");
    assert!(report.violations.is_empty());
    assert_eq!(sol.lifetime, 2);
    assert_eq!(sol.sinks(), vec![7, 13]);
    assert_eq!(sol.deployed.len(), 10);

    let mut broken = sol.clone();
    broken.period_mut(1).active.retain(|&s| s != SensorId::new(2, 2));
    let report = validate(&inst, &broken);
    assert!(report.count(Family::Coverage) >= 1, "{report}");
    assert!(started.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn single_period_model_file() {
    let mut parts = line_instance(2, 1.0, 1.0).into_parts();
    parts.horizon = 1;
    let inst = Instance::new(parts).unwrap();
    assert_eq!(milp::file_name(&inst), "spsrc_N2_K1_T1.lp");
    let text = milp::export_model(&inst, &ExportOptions::default()).unwrap().to_lp();
    assert_eq!(text, data("spsrc_N2_K1_T1.lp"));
}

#[test]
fn example_round_trips_through_model_values() {
    let inst = figure_one_instance();
    let sol = figure_one_solution();
    let model = milp::export_model(&inst, &ExportOptions::default()).unwrap();
    assert!(milp::check_solution(&model, &inst, &sol).is_empty());
    let values = milp::assign(&model.registry, &inst, &sol);
    let text = milp::write_values(&model.registry, &values);
    let back = milp::import_solution(&text, &inst).unwrap();
    assert_eq!(back, sol);
    assert!(validate(&inst, &back).feasible);
}
