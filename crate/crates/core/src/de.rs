//! Differential evolution, rand/1/bin.
//!
//! For every target `T` three further members `r1, r2, r3` are drawn, all
//! distinct from each other and from `T`. The donor is `r1 + F (r2 - r3)`.
//! Binomial crossover takes each donor gene with probability `Cr` and always
//! takes the gene at one uniformly drawn index. Trial vectors are clipped to
//! the gene bounds, passed through the problem's own repair, evaluated, and
//! replace their target when their fitness is lower or equal.
//!
//! A generation builds all trials from the current population before any
//! selection, so trial evaluation can run in parallel without changing the
//! result. The generation budget counts evaluated populations: the random
//! initial population is generation 1, so a run of `G` generations costs
//! exactly `popsize * G` fitness evaluations.
//!
//! All randomness comes from one `ChaCha8Rng` seeded with `DeConfig::seed`,
//! consumed in a fixed order: initial genes row by row, then per target the
//! three partner indices, the forced crossover index, and one uniform draw
//! per gene.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Control parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    pub popsize: usize,
    /// Differentiation constant `F`.
    pub mutation: f64,
    /// Crossover constant `Cr`.
    pub crossover: f64,
    pub generations: usize,
    pub seed: u64,
    /// Per-gene inclusive `[lo, hi]`.
    pub bounds: Vec<(f64, f64)>,
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.popsize < 4 {
            return Err(Error::invalid(format!(
                "popsize must be at least 4, got {}",
                self.popsize
            )));
        }
        if !(self.mutation > 0.0 && self.mutation <= 2.0) {
            return Err(Error::invalid(format!(
                "mutation factor must lie in (0, 2], got {}",
                self.mutation
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover) {
            return Err(Error::invalid(format!(
                "crossover constant must lie in [0, 1], got {}",
                self.crossover
            )));
        }
        if self.generations == 0 {
            return Err(Error::invalid("generations must be at least 1"));
        }
        if self.bounds.is_empty() {
            return Err(Error::invalid("problem dimension must be at least 1"));
        }
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::invalid(format!(
                    "bad bounds for gene {i}: [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }
}

/// One population member. `fitness` is `None` until evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub genome: Vec<f64>,
    pub fitness: Option<f64>,
}

impl Candidate {
    pub fn unevaluated(genome: Vec<f64>) -> Self {
        Self {
            genome,
            fitness: None,
        }
    }

    /// Fitness, treating an unevaluated candidate as infinitely bad.
    pub fn score(&self) -> f64 {
        self.fitness.unwrap_or(f64::INFINITY)
    }
}

/// Objective to minimize.
pub trait FitnessFunction: Sync {
    fn dimension(&self) -> usize;

    /// Must be deterministic for a given genome.
    fn evaluate(&self, genome: &[f64]) -> f64;

    /// Problem-specific repair applied after bound clipping.
    fn repair(&self, _genome: &mut [f64]) {}
}

impl<F: Fn(&[f64]) -> f64 + Sync> FitnessFunction for (usize, F) {
    fn dimension(&self) -> usize {
        self.0
    }

    fn evaluate(&self, genome: &[f64]) -> f64 {
        (self.1)(genome)
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvolveOptions {
    /// Genomes placed at the front of the initial population, replacing random members.
    pub injected: Vec<Vec<f64>>,
    /// Evaluate the trials of a generation on the rayon pool.
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evolution {
    pub best: Candidate,
    /// Best fitness seen so far, recorded after each generation.
    pub history: Vec<f64>,
    pub evaluations: usize,
}

pub fn clip(genome: &mut [f64], bounds: &[(f64, f64)]) {
    for (g, &(lo, hi)) in genome.iter_mut().zip(bounds) {
        *g = g.clamp(lo, hi);
    }
}

fn finish(genome: &mut [f64], bounds: &[(f64, f64)], f: &dyn FitnessFunction) {
    clip(genome, bounds);
    f.repair(genome);
}

/// Uniform random genomes within bounds, repaired and evaluated.
pub fn init_population<R: Rng>(
    cfg: &DeConfig,
    f: &dyn FitnessFunction,
    rng: &mut R,
) -> Vec<Candidate> {
    evaluate_all(random_genomes(cfg, f, rng), f, false)
}

fn random_genomes<R: Rng>(cfg: &DeConfig, f: &dyn FitnessFunction, rng: &mut R) -> Vec<Vec<f64>> {
    (0..cfg.popsize)
        .map(|_| {
            let mut g: Vec<f64> = cfg
                .bounds
                .iter()
                .map(|&(lo, hi)| {
                    if lo == hi {
                        lo
                    } else {
                        rng.random_range(lo..=hi)
                    }
                })
                .collect();
            finish(&mut g, &cfg.bounds, f);
            g
        })
        .collect()
}

fn evaluate_all(genomes: Vec<Vec<f64>>, f: &dyn FitnessFunction, parallel: bool) -> Vec<Candidate> {
    let score = |genome: Vec<f64>| {
        let fitness = f.evaluate(&genome);
        Candidate {
            genome,
            fitness: Some(fitness),
        }
    };
    if parallel {
        genomes.into_par_iter().map(score).collect()
    } else {
        genomes.into_iter().map(score).collect()
    }
}

/// `r1 + F (r2 - r3)`, unrepaired.
pub fn donor(r1: &[f64], r2: &[f64], r3: &[f64], mutation: f64) -> Vec<f64> {
    r1.iter()
        .zip(r2)
        .zip(r3)
        .map(|((a, b), c)| a + mutation * (b - c))
        .collect()
}

/// Binomial crossover with one forced donor gene.
pub fn crossover<R: Rng>(target: &[f64], donor: &[f64], cr: f64, rng: &mut R) -> Vec<f64> {
    let forced = rng.random_range(0..target.len());
    target
        .iter()
        .zip(donor)
        .enumerate()
        .map(|(i, (&t, &d))| {
            let u: f64 = rng.random();
            if u < cr || i == forced {
                d
            } else {
                t
            }
        })
        .collect()
}

/// Greedy selection; the trial survives ties.
pub fn select(target: Candidate, trial: Candidate) -> Candidate {
    if trial.score() <= target.score() {
        trial
    } else {
        target
    }
}

/// Three distinct population indices, none equal to `target`.
pub fn pick_partners<R: Rng>(popsize: usize, target: usize, rng: &mut R) -> [usize; 3] {
    let drawn = index::sample(rng, popsize - 1, 3);
    let mut out = [0; 3];
    for (slot, i) in out.iter_mut().zip(drawn.iter()) {
        *slot = if i >= target { i + 1 } else { i };
    }
    out
}

pub fn evolve(cfg: &DeConfig, f: &dyn FitnessFunction) -> Result<Evolution> {
    evolve_with(cfg, f, &EvolveOptions::default())
}

pub fn evolve_with(
    cfg: &DeConfig,
    f: &dyn FitnessFunction,
    opts: &EvolveOptions,
) -> Result<Evolution> {
    cfg.validate()?;
    if f.dimension() != cfg.dimension() {
        return Err(Error::invalid(format!(
            "fitness dimension {} does not match {} configured bounds",
            f.dimension(),
            cfg.dimension()
        )));
    }
    if opts.injected.len() > cfg.popsize {
        return Err(Error::invalid(
            "more injected genomes than population slots",
        ));
    }
    if let Some(g) = opts.injected.iter().find(|g| g.len() != cfg.dimension()) {
        return Err(Error::invalid(format!(
            "injected genome has {} genes, expected {}",
            g.len(),
            cfg.dimension()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut genomes = random_genomes(cfg, f, &mut rng);
    for (slot, g) in genomes.iter_mut().zip(&opts.injected) {
        slot.clone_from(g);
        finish(slot, &cfg.bounds, f);
    }
    let mut population = evaluate_all(genomes, f, opts.parallel);
    let mut evaluations = population.len();

    let mut best = best_of(&population).clone();
    let mut history = Vec::with_capacity(cfg.generations);
    history.push(best.score());

    let dim = cfg.dimension();
    for _ in 1..cfg.generations {
        let trials: Vec<Vec<f64>> = (0..cfg.popsize)
            .map(|t| {
                let [a, b, c] = pick_partners(cfg.popsize, t, &mut rng);
                let d = donor(
                    &population[a].genome,
                    &population[b].genome,
                    &population[c].genome,
                    cfg.mutation,
                );
                let mut trial = crossover(&population[t].genome, &d, cfg.crossover, &mut rng);
                debug_assert_eq!(trial.len(), dim);
                finish(&mut trial, &cfg.bounds, f);
                trial
            })
            .collect();
        let evaluated = evaluate_all(trials, f, opts.parallel);
        evaluations += evaluated.len();
        for (slot, trial) in population.iter_mut().zip(evaluated) {
            if trial.score() <= best.score() {
                best = trial.clone();
            }
            let target = std::mem::replace(slot, Candidate::unevaluated(Vec::new()));
            *slot = select(target, trial);
        }
        history.push(best.score());
    }

    Ok(Evolution {
        best,
        history,
        evaluations,
    })
}

fn best_of(population: &[Candidate]) -> &Candidate {
    population
        .iter()
        .reduce(|acc, c| if c.score() < acc.score() { c } else { acc })
        .expect("population is never empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(dim: usize) -> (usize, impl Fn(&[f64]) -> f64 + Sync) {
        (dim, |g: &[f64]| g.iter().map(|x| x * x).sum())
    }

    fn cfg(dim: usize, generations: usize, seed: u64) -> DeConfig {
        DeConfig {
            popsize: 12,
            mutation: 0.9,
            crossover: 0.5,
            generations,
            seed,
            bounds: vec![(-5.0, 5.0); dim],
        }
    }

    #[test]
    fn init_is_deterministic_and_in_bounds() {
        let c = cfg(4, 1, 3);
        let f = sphere(4);
        let a = init_population(&c, &f, &mut ChaCha8Rng::seed_from_u64(3));
        let b = init_population(&c, &f, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        for cand in &a {
            assert_eq!(cand.genome.len(), 4);
            assert!(cand.genome.iter().all(|g| (-5.0..=5.0).contains(g)));
            assert!(cand.fitness.is_some());
        }
    }

    #[test]
    fn init_degenerate_bounds() {
        let mut c = cfg(3, 1, 0);
        c.bounds = vec![(0.0, 0.0); 3];
        let pop = init_population(&c, &sphere(3), &mut ChaCha8Rng::seed_from_u64(0));
        assert!(pop.iter().all(|p| p.genome == vec![0.0; 3]));
    }

    #[test]
    fn donor_examples() {
        let r1 = [0.5, -1.0];
        assert_eq!(donor(&r1, &[3.0, 4.0], &[3.0, 4.0], 0.9), r1.to_vec());
        assert_eq!(donor(&r1, &[3.0, 4.0], &[1.0, 2.0], 0.0), r1.to_vec());
        let d = donor(&[0.0, 0.0], &[1.0, 2.0], &[0.0, 1.0], 0.9);
        assert!((d[0] - 0.9).abs() < 1e-15 && (d[1] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn crossover_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let target = vec![0.0; 6];
        let d = vec![1.0; 6];
        assert_eq!(crossover(&target, &d, 1.0, &mut rng), d);
        for _ in 0..100 {
            let t = crossover(&target, &d, 0.0, &mut rng);
            assert_eq!(t.iter().filter(|&&x| x == 1.0).count(), 1);
        }
    }

    #[test]
    fn crossover_donor_fraction() {
        // each non-forced gene is donor w.p. Cr, the forced one always: Cr + (1 - Cr)/nbp
        let nbp = 10;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let target = vec![0.0; nbp];
        let d = vec![1.0; nbp];
        let mut from_donor = 0usize;
        for _ in 0..10_000 {
            from_donor += crossover(&target, &d, 0.5, &mut rng)
                .iter()
                .filter(|&&x| x == 1.0)
                .count();
        }
        let frac = from_donor as f64 / (10_000 * nbp) as f64;
        let expect = 0.5 + 0.5 / nbp as f64;
        assert!((frac - expect).abs() < 0.02, "fraction {frac}");
    }

    #[test]
    fn select_rules() {
        let c = |f: f64| Candidate {
            genome: vec![f],
            fitness: Some(f),
        };
        assert_eq!(select(c(0.2), c(0.1)).score(), 0.1);
        assert_eq!(select(c(0.1), c(0.2)).score(), 0.1);
        let target = Candidate {
            genome: vec![1.0],
            fitness: Some(0.3),
        };
        let trial = Candidate {
            genome: vec![2.0],
            fitness: Some(0.3),
        };
        assert_eq!(select(target, trial).genome, vec![2.0]);
    }

    #[test]
    fn partners_are_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2_000 {
            let pop = rng.random_range(4..20);
            let t = rng.random_range(0..pop);
            let [a, b, c] = pick_partners(pop, t, &mut rng);
            let all = [a, b, c, t];
            for i in 0..4 {
                assert!(all[i] < pop);
                for j in (i + 1)..4 {
                    assert_ne!(all[i], all[j]);
                }
            }
        }
    }

    #[test]
    fn sphere_converges() {
        let out = evolve(&cfg(5, 200, 1), &sphere(5)).unwrap();
        assert!(out.best.score() < 1e-3, "best {}", out.best.score());
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(out.history.len(), 200);
        assert_eq!(out.evaluations, 12 * 200);
    }

    #[test]
    fn single_generation() {
        let out = evolve(&cfg(3, 1, 4), &sphere(3)).unwrap();
        assert_eq!(out.history.len(), 1);
        assert_eq!(out.evaluations, 12);
    }

    #[test]
    fn seeded_runs_match() {
        let a = evolve(&cfg(4, 30, 42), &sphere(4)).unwrap();
        let b = evolve(&cfg(4, 30, 42), &sphere(4)).unwrap();
        assert_eq!(a, b);
        let p = evolve_with(
            &cfg(4, 30, 42),
            &sphere(4),
            &EvolveOptions {
                parallel: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, p);
    }

    #[test]
    fn rejects_small_population() {
        let mut c = cfg(3, 5, 0);
        c.popsize = 3;
        assert!(evolve(&c, &sphere(3)).is_err());
        let mut c = cfg(3, 5, 0);
        c.crossover = 1.5;
        assert!(evolve(&c, &sphere(3)).is_err());
        assert!(evolve(&cfg(3, 5, 0), &sphere(4)).is_err());
    }

    #[test]
    fn injected_genome_is_kept() {
        let opts = EvolveOptions {
            injected: vec![vec![0.0; 3]],
            parallel: false,
        };
        let out = evolve_with(&cfg(3, 2, 8), &sphere(3), &opts).unwrap();
        assert_eq!(out.history[0], 0.0);
        assert_eq!(out.best.score(), 0.0);
    }
}
