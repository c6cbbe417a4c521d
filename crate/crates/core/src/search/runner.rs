//! The restart-based multi-objective search loop.
//!
//! Per test run: seed a population from failing training configs (each
//! perturbed once with uniform feature weights), evolve with tournament
//! selection, single-point crossover and saliency-guided mutation, and keep
//! survivors by the configured elitism. The run ends on hypervolume
//! stagnation of front 0 or at the generation cap; its representative joins
//! the archive and the next run starts against the grown archive.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diversity::{euclidean_diversity, PcaClusterMetric};
use crate::moea::{
    elitism, front_zero, mutate, single_point_crossover, tournament_select, Individual,
    Population,
};
use crate::rng::stream;
use crate::scenario::{encode, EncodedVector, FeatureSchema, ScenarioConfig};
use crate::surrogate::{saliency, MlpModel, SurrogateError};

use super::{
    detect_stagnation, hypervolume_2d, objective_transform, select_representative, Archive,
    ArchiveEntry, DiversityMetric, LogRow, SearchConfig, SearchError, SearchLog, SearchOutcome,
};

/// Diversity scorer for one evaluation batch. The PCA variant is refit per
/// generation; the archive is frozen within a run, so refits inside a run
/// see identical data and the same clustering stream.
pub(super) enum DivScorer<'a> {
    Euclidean(&'a [EncodedVector]),
    Pca(Box<PcaClusterMetric>),
}

impl<'a> DivScorer<'a> {
    pub(super) fn fit(
        metric: DiversityMetric,
        archive: &'a [EncodedVector],
        seed: u64,
        run: usize,
    ) -> Result<Self, SearchError> {
        match metric {
            DiversityMetric::Euclidean => Ok(DivScorer::Euclidean(archive)),
            DiversityMetric::Pca => {
                match PcaClusterMetric::fit(archive, stream_seed(seed, run))? {
                    Some(fitted) => Ok(DivScorer::Pca(Box::new(fitted))),
                    None => Ok(DivScorer::Euclidean(archive)),
                }
            }
        }
    }

    pub(super) fn score(&self, encoded: &EncodedVector) -> Result<f64, SearchError> {
        let value = match self {
            DivScorer::Euclidean(archive) => euclidean_diversity(encoded, archive)?,
            DivScorer::Pca(metric) => metric.score(encoded)?,
        };
        Ok(value)
    }
}

/// Derives the per-run clustering seed from the root seed.
fn stream_seed(seed: u64, run: usize) -> u64 {
    use rand_chacha::rand_core::RngCore;
    stream(seed, "clustering", run as u64).next_u64()
}

/// Evaluates one config: surrogate prediction, diversity against the
/// archive, cached saliency. Counts one surrogate evaluation.
fn evaluate(
    config: ScenarioConfig,
    model: &MlpModel,
    schema: &FeatureSchema,
    scorer: &DivScorer,
    evaluations: &mut u64,
) -> Result<Individual, SearchError> {
    let encoded = encode(&config, schema)?;
    let s_value = model.predict(&encoded)?;
    *evaluations += 1;
    let div_value = scorer.score(&encoded)?;
    let weights = saliency(model, &encoded, schema)?;
    Ok(Individual::new(
        config,
        objective_transform(s_value, div_value),
        weights,
    ))
}

/// Checks the model fits the schema and the seed set is usable.
pub(super) fn check_inputs(
    cfg: &SearchConfig,
    model: &MlpModel,
    schema: &FeatureSchema,
    seed_set: &[ScenarioConfig],
) -> Result<(), SearchError> {
    cfg.validate()?;
    if seed_set.is_empty() {
        return Err(SearchError::EmptySeedSet);
    }
    if model.input_width() != schema.encoded_width() {
        return Err(SearchError::Surrogate(SurrogateError::DimensionMismatch {
            expected: schema.encoded_width(),
            got: model.input_width(),
        }));
    }
    Ok(())
}

/// Draws one seeded starting config: a training failure perturbed once with
/// uniform feature weights, so restarts explore near known failures rather
/// than replaying them exactly.
pub(super) fn seeded_config<R: Rng>(
    seed_set: &[ScenarioConfig],
    schema: &FeatureSchema,
    cfg: &SearchConfig,
    rng: &mut R,
) -> ScenarioConfig {
    let n = schema.feature_count();
    let uniform = vec![1.0 / n as f64; n];
    let base = &seed_set[rng.random_range(0..seed_set.len())];
    mutate(base, &uniform, schema, &cfg.mutation, rng)
}

/// Saliency weights to guide an offspring's mutation: the parent's cached
/// weights when crossover left the config unchanged, otherwise a fresh
/// gradient at the offspring.
fn offspring_weights(
    child: &ScenarioConfig,
    parent: &Individual,
    model: &MlpModel,
    schema: &FeatureSchema,
) -> Result<Vec<f64>, SearchError> {
    if *child == parent.config {
        Ok(parent.saliency.clone())
    } else {
        let encoded = encode(child, schema)?;
        Ok(saliency(model, &encoded, schema)?)
    }
}

/// Runs the full multi-objective search.
///
/// Deterministic given `cfg.seed`: initialization, variation and clustering
/// draw from independent named streams per run.
pub fn run_search(
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
        let mut var_rng: ChaCha8Rng = stream(cfg.seed, "variation", run as u64);

        let scorer = DivScorer::fit(cfg.diversity, &archive_encoded, cfg.seed, run)?;
        let mut population: Population = Vec::with_capacity(ps);
        for _ in 0..ps {
            let config = seeded_config(seed_set, schema, cfg, &mut init_rng);
            population.push(evaluate(config, model, schema, &scorer, &mut evaluations)?);
        }
        // rank without truncation so tournaments see fronts and keys
        population = elitism(population, ps, cfg.algorithm);

        let front_objs = |pop: &Population| -> Vec<[f64; 2]> {
            front_zero(pop).iter().map(|&i| pop[i].objectives).collect()
        };
        let mut hv_history = vec![hypervolume_2d(&front_objs(&population), cfg.reference)];
        log.rows.push(LogRow {
            run,
            generation: 0,
            hypervolume: hv_history[0],
            evaluations,
            archive_size: archive.len(),
        });

        for generation in 1..=cfg.generations {
            let scorer = DivScorer::fit(cfg.diversity, &archive_encoded, cfg.seed, run)?;
            let mut offspring: Population = Vec::with_capacity(ps);
            while offspring.len() < ps {
                let i1 = tournament_select(&population, &mut var_rng);
                let i2 = tournament_select(&population, &mut var_rng);
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
                    let weights = offspring_weights(&child, &population[parent_idx], model, schema)?;
                    let mutated = mutate(&child, &weights, schema, &cfg.mutation, &mut var_rng);
                    offspring.push(evaluate(mutated, model, schema, &scorer, &mut evaluations)?);
                }
            }

            let mut combined = population;
            combined.extend(offspring);
            population = elitism(combined, ps, cfg.algorithm);

            let hv = hypervolume_2d(&front_objs(&population), cfg.reference);
            hv_history.push(hv);
            log.rows.push(LogRow {
                run,
                generation,
                hypervolume: hv,
                evaluations,
                archive_size: archive.len(),
            });

            let stagnated =
                detect_stagnation(&hv_history, cfg.stagnation_window, cfg.stagnation_tol);
            if stagnated || generation == cfg.generations {
                let front: Vec<&Individual> =
                    front_zero(&population).iter().map(|&i| &population[i]).collect();
                let representative = select_representative(&front, cfg.selection);
                archive_encoded.push(encode(&representative.config, schema)?);
                archive.entries.push(ArchiveEntry {
                    config: representative.config.clone(),
                    predicted_failure: 1.0 - representative.objectives[0],
                    diversity: crate::diversity::DIVERSITY_MAX - representative.objectives[1],
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
