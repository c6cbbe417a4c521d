//! Scratch experiment runner for environment tuning (not shipped).

use faultline_core::analysis::{median, wilcoxon_rank_sum};
use faultline_core::moea::MoeaAlgorithm;
use faultline_core::search::{DiversityMetric, SelectionStrategy};
use faultline_core::surrogate::{train, TrainParams};
use faultline_core::testbed::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("rate");
    match mode {
        "rate" => rate(),
        "surrogate" => surrogate(),
        "trend" => trend(20),
        "trend5" => trend(5),
        "knee" => knee(20),
        "inspect" => inspect(),
        _ => eprintln!("unknown mode"),
    }
}

fn rate() {
    let env = EnvKind::Parking.build();
    let log = generate_training_log(&env, 20000, 424242);
    println!("parking failure rate: {:.4}", log.failure_rate());
    // failure mode mix: timeout vs collision
    let mut timeout = 0;
    let mut collision = 0;
    let max_steps = match &env {
        TestbedEnv::Parking(p) => p.max_steps,
        _ => unreachable!(),
    };
    for r in &log.records {
        if r.failed {
            if r.trajectory.len() >= max_steps {
                timeout += 1;
            } else {
                collision += 1;
            }
        }
    }
    println!("collision: {collision}, timeout: {timeout}");

    let env = EnvKind::Walker.build();
    let log = generate_training_log(&env, 20000, 7);
    println!("walker failure rate: {:.4}", log.failure_rate());
}

fn surrogate() {
    let env = EnvKind::Parking.build();
    for seed in [1u64, 2, 3] {
        let log = generate_training_log(&env, 1500, seed);
        let set = log.to_training_set(env.schema()).unwrap();
        let (model, report) = train(
            &set,
            &TrainParams {
                seed,
                ..TrainParams::default()
            },
        )
        .unwrap();
        // holdout
        let holdout = generate_training_log(&env, 2000, seed + 1000);
        let hset = holdout.to_training_set(env.schema()).unwrap();
        let mut correct = 0;
        for (x, y) in &hset.examples {
            let p = model.predict(x).unwrap();
            if (p >= 0.5) == (*y == 1) {
                correct += 1;
            }
        }
        println!(
            "seed {seed}: train rate {:.3}, train acc {:.3}, holdout acc {:.3}, final loss {:.4}",
            log.failure_rate(),
            report.training_accuracy,
            correct as f64 / hset.len() as f64,
            report.final_loss,
        );
    }
}

fn env_or<T: std::str::FromStr>(name: &str, default: T) -> T {
    std::env::var(name)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

fn campaign_plan(seeds: Vec<u64>, approaches: Vec<ApproachSpec>) -> CampaignPlan {
    let mut training = TrainingSpec::default();
    training.epochs = env_or("TUNE_EPOCHS", training.epochs);
    training.samples = env_or("TUNE_SAMPLES", training.samples);
    training.hidden_sizes = vec![env_or("TUNE_HIDDEN", training.hidden_sizes[0])];
    let mut budget = BudgetSpec::default();
    budget.total_runs = env_or("TUNE_TR", budget.total_runs);
    CampaignPlan {
        env: EnvKind::Parking,
        approaches,
        seeds,
        budget,
        training,
    }
}

fn print_approach(report: &CampaignReport, name: &str) {
    let s = &report.summaries[name];
    println!(
        "  {name}: total {:.1} ({:.1}) unique {:.1} ({:.1}) in-ent {:.1} ({:.1}) out-ent {:.1} ({:.1}) ttf-ev {:.0} in-cl {:.1}",
        s["total_failures"].median,
        s["total_failures"].iqr,
        s["unique_failures"].median,
        s["unique_failures"].iqr,
        s["input_entropy"].median,
        s["input_entropy"].iqr,
        s["output_entropy"].median,
        s["output_entropy"].iqr,
        s["ttf_evaluations"].median,
        s["input_clusters"].median,
    );
}

fn trend(n_seeds: u64) {
    let start = std::time::Instant::now();
    let plan = campaign_plan(
        (1..=n_seeds).collect(),
        vec![
            ApproachSpec {
                name: "baseline".into(),
                method: SearchMethod::BaselineGa,
            },
            ApproachSpec {
                name: "nexus".into(),
                method: SearchMethod::Moea {
                    algorithm: MoeaAlgorithm::AgeMoea,
                    diversity: DiversityMetric::Euclidean,
                    selection: SelectionStrategy::Knee,
                },
            },
        ],
    );
    let report = run_campaign(&plan).unwrap();
    print_approach(&report, "baseline");
    print_approach(&report, "nexus");
    let unique = |name: &str| -> Vec<f64> {
        report
            .rows
            .iter()
            .filter(|r| r.approach == name)
            .map(|r| r.unique_failures as f64)
            .collect()
    };
    let entropy = |name: &str| -> Vec<f64> {
        report
            .rows
            .iter()
            .filter(|r| r.approach == name)
            .map(|r| r.output_entropy)
            .collect()
    };
    println!("  unique: nexus {:?}", unique("nexus"));
    println!("  unique: base  {:?}", unique("baseline"));
    let p_unique = wilcoxon_rank_sum(&unique("nexus"), &unique("baseline")).unwrap();
    let p_entropy = wilcoxon_rank_sum(&entropy("nexus"), &entropy("baseline")).unwrap();
    println!(
        "  med unique nexus {} vs base {} (p={:.5})",
        median(&unique("nexus")),
        median(&unique("baseline")),
        p_unique
    );
    println!(
        "  med out-entropy nexus {:.2} vs base {:.2} (p={:.5})",
        median(&entropy("nexus")),
        median(&entropy("baseline")),
        p_entropy
    );
    println!("  elapsed: {:.1}s", start.elapsed().as_secs_f64());
}

fn knee(n_seeds: u64) {
    let start = std::time::Instant::now();
    let plan = campaign_plan(
        (1..=n_seeds).collect(),
        vec![
            ApproachSpec {
                name: "knee".into(),
                method: SearchMethod::Moea {
                    algorithm: MoeaAlgorithm::AgeMoea,
                    diversity: DiversityMetric::Euclidean,
                    selection: SelectionStrategy::Knee,
                },
            },
            ApproachSpec {
                name: "max-o1".into(),
                method: SearchMethod::Moea {
                    algorithm: MoeaAlgorithm::AgeMoea,
                    diversity: DiversityMetric::Euclidean,
                    selection: SelectionStrategy::MaxO1,
                },
            },
        ],
    );
    let report = run_campaign(&plan).unwrap();
    print_approach(&report, "knee");
    print_approach(&report, "max-o1");
    let input_entropy = |name: &str| -> Vec<f64> {
        report
            .rows
            .iter()
            .filter(|r| r.approach == name)
            .map(|r| r.input_entropy)
            .collect()
    };
    println!(
        "  med input entropy: knee {:.2} vs max-o1 {:.2}",
        median(&input_entropy("knee")),
        median(&input_entropy("max-o1"))
    );
    println!("  elapsed: {:.1}s", start.elapsed().as_secs_f64());
}

#[allow(dead_code)]
fn inspect() {
    use faultline_core::scenario::FeatureValue;
    use faultline_core::search::{run_search, SearchConfig};
    use faultline_core::surrogate::{train as train_model, TrainParams};
    let env = EnvKind::Parking.build();
    let schema = env.schema();
    let seed = 3u64;
    let log = generate_training_log(&env, 4000, seed);
    let set = log.to_training_set(schema).unwrap();
    let (model, _) = train_model(&set, &TrainParams { epochs: 60, seed, ..TrainParams::default() }).unwrap();
    for strategy in [SelectionStrategy::MaxO1, SelectionStrategy::Knee] {
        let cfg = SearchConfig {
            total_runs: 20,
            selection: strategy,
            seed,
            ..SearchConfig::default()
        };
        let outcome = run_search(&cfg, &model, schema, &log.failing_configs()).unwrap();
        println!("=== {strategy:?}");
        for e in &outcome.archive.entries {
            let rec = env.execute(&e.config).unwrap();
            let goal = match e.config.value_by_name("goal_lane_idx", schema) { Some(FeatureValue::Categorical(g)) => *g, _ => 0 };
            let heading = match e.config.value_by_name("heading_ego", schema) { Some(FeatureValue::Real(h)) => *h, _ => 0.0 };
            let parked = match e.config.value_by_name("parked_vehicles_lane_indices", schema) { Some(FeatureValue::MembershipList(l)) => l.clone(), _ => vec![] };
            let pos = match e.config.value_by_name("position_ego", schema) { Some(FeatureValue::RealVector(p)) => p.clone(), _ => vec![] };
            println!("  run {:2} s={:.3} fail={} len={:2} goal={:2} h={:+.2} pos=({:+.1},{:+.1}) parked={:?}",
                e.run, e.predicted_failure, rec.failed as u8, rec.trajectory.len(), goal, heading, pos[0], pos[1], parked);
        }
    }
}
