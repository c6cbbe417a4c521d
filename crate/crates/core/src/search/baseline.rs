//! Single-objective GA baseline: fitness is the predicted failure
//! probability alone. Shares the initialization, saliency-guided variation
//! and budget accounting of the multi-objective search, with elitism by
//! fitness and a best-fitness stagnation rule.

use rand::Rng;

use crate::diversity::euclidean_diversity;
use crate::moea::{mutate, single_point_crossover};
use crate::rng::stream;
use crate::scenario::{encode, EncodedVector, FeatureSchema, ScenarioConfig};
use crate::surrogate::{saliency, MlpModel};

use super::runner::{check_inputs, seeded_config};
use super::{
    detect_stagnation, Archive, ArchiveEntry, LogRow, SearchConfig, SearchError, SearchLog,
    SearchOutcome,
};

struct GaIndividual {
    config: ScenarioConfig,
    fitness: f64,
    saliency: Vec<f64>,
}

fn evaluate(
    config: ScenarioConfig,
    model: &MlpModel,
    schema: &FeatureSchema,
    evaluations: &mut u64,
) -> Result<GaIndividual, SearchError> {
    let encoded = encode(&config, schema)?;
    let fitness = model.predict(&encoded)?;
    *evaluations += 1;
    let weights = saliency(model, &encoded, schema)?;
    Ok(GaIndividual {
        config,
        fitness,
        saliency: weights,
    })
}

/// Binary tournament on fitness; tie resolves by coin flip.
fn select<R: Rng>(pop: &[GaIndividual], rng: &mut R) -> usize {
    let a = rng.random_range(0..pop.len());
    let b = rng.random_range(0..pop.len());
    if pop[a].fitness != pop[b].fitness {
        if pop[a].fitness > pop[b].fitness {
            a
        } else {
            b
        }
    } else if rng.random::<bool>() {
        a
    } else {
        b
    }
}

/// Keeps the `size` fittest individuals, stable on ties.
fn truncate_by_fitness(mut pool: Vec<GaIndividual>, size: usize) -> Vec<GaIndividual> {
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| {
        pool[b]
            .fitness
            .partial_cmp(&pool[a].fitness)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let keep: Vec<usize> = order.into_iter().take(size).collect();
    let mut survivors = Vec::with_capacity(size);
    let mut idx = 0;
    pool.retain(|_| {
        let kept = keep.contains(&idx);
        idx += 1;
        kept
    });
    survivors.append(&mut pool);
    survivors
}

/// Runs the single-objective GA with the shared budget accounting. The log's
/// `hypervolume` column records the monitored best fitness.
pub fn run_baseline_ga(
    cfg: &SearchConfig,
    model: &MlpModel,
    schema: &FeatureSchema,
    seed_set: &[ScenarioConfig],
) -> Result<SearchOutcome, SearchError> {
    check_inputs(cfg, model, schema, seed_set)?;

    let ps = cfg.population_size;
    let mut archive = Archive::default();
    let mut archive_encoded: Vec<EncodedVector> = Vec::new();
    let mut log = SearchLog::default();
    let mut evaluations: u64 = 0;

    for run in 0..cfg.total_runs {
        let mut init_rng = stream(cfg.seed, "init", run as u64);
        let mut var_rng = stream(cfg.seed, "variation", run as u64);

        let mut population: Vec<GaIndividual> = Vec::with_capacity(ps);
        for _ in 0..ps {
            let config = seeded_config(seed_set, schema, cfg, &mut init_rng);
            population.push(evaluate(config, model, schema, &mut evaluations)?);
        }

        let best_fitness = |pop: &[GaIndividual]| -> f64 {
            pop.iter().map(|i| i.fitness).fold(f64::NEG_INFINITY, f64::max)
        };
        let mut fitness_history = vec![best_fitness(&population)];
        log.rows.push(LogRow {
            run,
            generation: 0,
            hypervolume: fitness_history[0],
            evaluations,
            archive_size: archive.len(),
        });

        for generation in 1..=cfg.generations {
            let mut offspring: Vec<GaIndividual> = Vec::with_capacity(ps);
            while offspring.len() < ps {
                let i1 = select(&population, &mut var_rng);
                let i2 = select(&population, &mut var_rng);
                let (c1, c2) = if var_rng.random::<f64>() < cfg.crossover_rate {
                    single_point_crossover(
                        &population[i1].config,
                        &population[i2].config,
                        schema,
                        &mut var_rng,
                    )
                } else {
                    (population[i1].config.clone(), population[i2].config.clone())
                };
                for (parent_idx, child) in [(i1, c1), (i2, c2)] {
                    if offspring.len() == ps {
                        break;
                    }
                    let weights = if child == population[parent_idx].config {
                        population[parent_idx].saliency.clone()
                    } else {
                        saliency(model, &encode(&child, schema)?, schema)?
                    };
                    let mutated = mutate(&child, &weights, schema, &cfg.mutation, &mut var_rng);
                    offspring.push(evaluate(mutated, model, schema, &mut evaluations)?);
                }
            }

            let mut combined = population;
            combined.extend(offspring);
            population = truncate_by_fitness(combined, ps);

            let best = best_fitness(&population);
            fitness_history.push(best);
            log.rows.push(LogRow {
                run,
                generation,
                hypervolume: best,
                evaluations,
                archive_size: archive.len(),
            });

            let stagnated =
                detect_stagnation(&fitness_history, cfg.stagnation_window, cfg.stagnation_tol);
            if stagnated || generation == cfg.generations {
                // fittest individual; ties resolve to the earliest
                let best_idx = (0..population.len())
                    .max_by(|&a, &b| {
                        population[a]
                            .fitness
                            .partial_cmp(&population[b].fitness)
                            .unwrap_or(std::cmp::Ordering::Equal)
                            .then(b.cmp(&a))
                    })
                    .expect("population is non-empty");
                let chosen = &population[best_idx];
                let encoded = encode(&chosen.config, schema)?;
                let diversity = euclidean_diversity(&encoded, &archive_encoded)?;
                archive_encoded.push(encoded);
                archive.entries.push(ArchiveEntry {
                    config: chosen.config.clone(),
                    predicted_failure: chosen.fitness,
                    diversity,
                    run,
                    generation,
                    evaluations,
                });
                break;
            }
        }
    }

    Ok(SearchOutcome { archive, log })
}
