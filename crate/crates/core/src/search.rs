//! PRT-set selection: baseline constructions, random set optimization, the
//! genetic algorithm, and an exhaustive oracle for small instances.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{MeritEvaluator, PrtSet};
use crate::rng::master_rng;
use crate::scalar::Scalar;

/// Binary PRT-membership vector of length N with exactly M ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chromosome {
    bits: Vec<bool>,
}

impl Chromosome {
    pub fn from_indices(indices: &[usize], n_tones: usize) -> Self {
        let mut bits = vec![false; n_tones];
        for &i in indices {
            bits[i] = true;
        }
        Chromosome { bits }
    }

    /// Uniformly random M-subset membership vector.
    pub fn random<R: Rng>(n_tones: usize, prt_size: usize, rng: &mut R) -> Self {
        let picked = rand::seq::index::sample(rng, n_tones, prt_size);
        let mut bits = vec![false; n_tones];
        for i in picked {
            bits[i] = true;
        }
        Chromosome { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn to_prt_set(&self) -> Result<PrtSet> {
        PrtSet::new(self.to_indices(), self.bits.len())
    }
}

/// Genetic-algorithm parameters. Merit evaluation counts are S*(K+1):
/// the initial population plus one population per generation.
#[derive(Debug, Clone)]
pub struct GaConfig {
    pub population_size: usize,
    pub prt_size: usize,
    pub n_tones: usize,
    pub elites: usize,
    pub p_crossover: f64,
    pub p_mutation: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Optional early stop once the best merit falls to this threshold.
    /// Disabled by default so evaluation counts stay comparable.
    pub merit_threshold: Option<f64>,
}

impl GaConfig {
    /// The experiment defaults: S=30, K=170, p_c=0.9, p_m=0.05, T=2.
    pub fn default_for(n_tones: usize, prt_size: usize, seed: u64) -> Self {
        GaConfig {
            population_size: 30,
            prt_size,
            n_tones,
            elites: 2,
            p_crossover: 0.9,
            p_mutation: 0.05,
            max_iterations: 170,
            seed,
            merit_threshold: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.prt_size == 0 || self.prt_size >= self.n_tones {
            return Err(Error::invalid("require 0 < M < N"));
        }
        if self.population_size == 0 {
            return Err(Error::invalid("population size must be positive"));
        }
        if self.elites >= self.population_size {
            return Err(Error::invalid("elite count must be below population size"));
        }
        if !(0.0..=1.0).contains(&self.p_crossover) || !(0.0..=1.0).contains(&self.p_mutation) {
            return Err(Error::invalid("probabilities must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Outcome of any PRT-set search.
#[derive(Debug, Clone)]
pub struct SearchResult<T: Scalar> {
    pub best_prt: PrtSet,
    pub best_merit: T,
    /// Best merit after each generation (non-increasing). For random search a
    /// generation is one trial; the exhaustive oracle reports a single entry.
    pub merit_history: Vec<T>,
    /// Number of merit evaluations performed.
    pub evaluations: u64,
}

/// Consecutive block {start, start+1, ..., start+M-1} (mod N).
pub fn consecutive_prt(n_tones: usize, prt_size: usize, start: usize) -> Result<PrtSet> {
    if start >= n_tones {
        return Err(Error::invalid(format!(
            "start {start} out of range [0, {n_tones})"
        )));
    }
    PrtSet::new(
        (0..prt_size).map(|k| (start + k) % n_tones).collect(),
        n_tones,
    )
}

/// Equally spaced comb {offset + k*(N/M)} (mod N); requires M | N.
pub fn equally_spaced_prt(n_tones: usize, prt_size: usize, offset: usize) -> Result<PrtSet> {
    if prt_size == 0 || !n_tones.is_multiple_of(prt_size) {
        return Err(Error::invalid(format!(
            "tone count {n_tones} is not divisible by PRT size {prt_size}"
        )));
    }
    if offset >= n_tones {
        return Err(Error::invalid(format!(
            "offset {offset} out of range [0, {n_tones})"
        )));
    }
    let stride = n_tones / prt_size;
    PrtSet::new(
        (0..prt_size)
            .map(|k| (offset + k * stride) % n_tones)
            .collect(),
        n_tones,
    )
}

fn merit_key<T: Scalar>(merit: T, chrom: &Chromosome) -> (T, &[bool]) {
    (merit, chrom.bits())
}

fn better<T: Scalar>(a: (T, &[bool]), b: (T, &[bool])) -> bool {
    match a.0.partial_cmp(&b.0).expect("merit is finite") {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => a.1 < b.1,
    }
}

/// Best of `trials` uniformly sampled M-subsets.
pub fn random_search<T: Scalar>(
    n_tones: usize,
    prt_size: usize,
    trials: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SearchResult<T>> {
    if trials == 0 {
        return Err(Error::invalid("random search needs at least one trial"));
    }
    if prt_size == 0 || prt_size >= n_tones {
        return Err(Error::invalid("require 0 < M < N"));
    }
    let evaluator = MeritEvaluator::<T>::new(n_tones);
    let mut best: Option<(T, Chromosome)> = None;
    let mut history = Vec::with_capacity(trials as usize);

    const CHUNK: u64 = 1024;
    let mut remaining = trials;
    while remaining > 0 {
        let batch = remaining.min(CHUNK);
        let candidates: Vec<Chromosome> = (0..batch)
            .map(|_| Chromosome::random(n_tones, prt_size, rng))
            .collect();
        let merits: Vec<T> = candidates
            .par_iter()
            .map(|c| evaluator.merit_of_indices(&c.to_indices()))
            .collect();
        for (chrom, merit) in candidates.into_iter().zip(merits) {
            let replace = match &best {
                None => true,
                Some((bm, bc)) => better(merit_key(merit, &chrom), merit_key(*bm, bc)),
            };
            if replace {
                best = Some((merit, chrom));
            }
            history.push(best.as_ref().unwrap().0);
        }
        remaining -= batch;
    }

    let (best_merit, best_chrom) = best.unwrap();
    Ok(SearchResult {
        best_prt: best_chrom.to_prt_set()?,
        best_merit,
        merit_history: history,
        evaluations: trials,
    })
}

/// One-point crossover: prefixes [0, point) swapped, offspring repaired to
/// the parents' one-count.
pub fn crossover<R: Rng>(
    a: &Chromosome,
    b: &Chromosome,
    point: usize,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    let n = a.len();
    assert_eq!(n, b.len());
    assert!(point > 0 && point < n, "cut point must lie in (0, N)");
    let m = a.ones();
    debug_assert_eq!(m, b.ones());
    let mut c = a.bits.clone();
    let mut d = b.bits.clone();
    for k in 0..point {
        std::mem::swap(&mut c[k], &mut d[k]);
    }
    (
        repair(&Chromosome { bits: c }, m, rng),
        repair(&Chromosome { bits: d }, m, rng),
    )
}

fn flip_bits<R: Rng>(bits: &[bool], p_mutation: f64, rng: &mut R) -> Vec<bool> {
    bits.iter()
        .map(|&b| {
            if rng.random::<f64>() < p_mutation {
                !b
            } else {
                b
            }
        })
        .collect()
}

/// Independent per-bit flips with probability `p_mutation`, then repair back
/// to the input's one-count.
pub fn mutate<R: Rng>(c: &Chromosome, p_mutation: f64, rng: &mut R) -> Chromosome {
    let m = c.ones();
    let flipped = Chromosome {
        bits: flip_bits(&c.bits, p_mutation, rng),
    };
    repair(&flipped, m, rng)
}

/// Restores feasibility with the minimum number of bit changes: surplus ones
/// are cleared at uniformly chosen one-positions, missing ones are set at
/// uniformly chosen zero-positions.
pub fn repair<R: Rng>(c: &Chromosome, prt_size: usize, rng: &mut R) -> Chromosome {
    let mut bits = c.bits.clone();
    let ones: Vec<usize> = c.to_indices();
    if ones.len() > prt_size {
        let surplus = ones.len() - prt_size;
        for pos in rand::seq::index::sample(rng, ones.len(), surplus) {
            bits[ones[pos]] = false;
        }
    } else if ones.len() < prt_size {
        let zeros: Vec<usize> = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| (!b).then_some(i))
            .collect();
        let deficit = prt_size - ones.len();
        for pos in rand::seq::index::sample(rng, zeros.len(), deficit) {
            bits[zeros[pos]] = true;
        }
    }
    Chromosome { bits }
}

fn sorted_by_merit<T: Scalar>(merits: &[T], population: &[Chromosome]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&i, &j| {
        merits[i]
            .partial_cmp(&merits[j])
            .expect("merit is finite")
            .then_with(|| population[i].bits().cmp(population[j].bits()))
    });
    order
}

/// Genetic search for a low-merit PRT set.
///
/// Per generation: binary-tournament parent selection, random pairing,
/// one-point crossover with probability p_c, per-bit mutation with p_m,
/// repair after each operator, then the T stored elites replace the T worst
/// offspring. The best merit seen is tracked and never increases.
pub fn ga_search<T: Scalar>(cfg: &GaConfig) -> Result<SearchResult<T>> {
    cfg.validate()?;
    let s = cfg.population_size;
    let evaluator = MeritEvaluator::<T>::new(cfg.n_tones);
    let mut rng = master_rng(cfg.seed);

    let evaluate = |population: &[Chromosome]| -> Vec<T> {
        population
            .par_iter()
            .map(|c| evaluator.merit_of_indices(&c.to_indices()))
            .collect()
    };

    let mut population: Vec<Chromosome> = (0..s)
        .map(|_| Chromosome::random(cfg.n_tones, cfg.prt_size, &mut rng))
        .collect();
    let mut merits = evaluate(&population);
    let mut evaluations = s as u64;

    let first = sorted_by_merit(&merits, &population)[0];
    let mut best_chrom = population[first].clone();
    let mut best_merit = merits[first];
    let mut history = vec![best_merit];

    let threshold = cfg.merit_threshold.map(T::of_f64);

    for _generation in 0..cfg.max_iterations {
        if let Some(th) = threshold {
            if best_merit <= th {
                break;
            }
        }

        // elites carried over with their known merits
        let order = sorted_by_merit(&merits, &population);
        let elites: Vec<(Chromosome, T)> = order[..cfg.elites]
            .iter()
            .map(|&i| (population[i].clone(), merits[i]))
            .collect();

        // binary tournaments on merit
        let parents: Vec<Chromosome> = (0..s)
            .map(|_| {
                let i = rng.random_range(0..s);
                let j = rng.random_range(0..s);
                let pick = if better(
                    merit_key(merits[i], &population[i]),
                    merit_key(merits[j], &population[j]),
                ) {
                    i
                } else {
                    j
                };
                population[pick].clone()
            })
            .collect();

        // random pairing without replacement; odd leftover passes through
        let mut slots: Vec<usize> = (0..s).collect();
        slots.shuffle(&mut rng);
        let mut offspring: Vec<Option<Chromosome>> = vec![None; s];
        for pair in slots.chunks(2) {
            if pair.len() == 2 {
                let (left, right) = (&parents[pair[0]], &parents[pair[1]]);
                let (c, d) = if rng.random::<f64>() < cfg.p_crossover {
                    let point = rng.random_range(1..cfg.n_tones);
                    crossover(left, right, point, &mut rng)
                } else {
                    (left.clone(), right.clone())
                };
                offspring[pair[0]] = Some(c);
                offspring[pair[1]] = Some(d);
            } else {
                offspring[pair[0]] = Some(parents[pair[0]].clone());
            }
        }

        let mut next: Vec<Chromosome> = offspring
            .into_iter()
            .map(|c| mutate(&c.expect("every slot filled"), cfg.p_mutation, &mut rng))
            .collect();
        debug_assert!(next.iter().all(|c| c.ones() == cfg.prt_size));
        let mut next_merits = evaluate(&next);
        evaluations += s as u64;

        let gen_best = sorted_by_merit(&next_merits, &next)[0];
        if better(
            merit_key(next_merits[gen_best], &next[gen_best]),
            merit_key(best_merit, &best_chrom),
        ) {
            best_merit = next_merits[gen_best];
            best_chrom = next[gen_best].clone();
        }

        // stored elites replace the T worst offspring
        let order = sorted_by_merit(&next_merits, &next);
        for (&slot, (chrom, merit)) in order.iter().rev().zip(elites) {
            next[slot] = chrom;
            next_merits[slot] = merit;
        }

        population = next;
        merits = next_merits;
        history.push(best_merit);
    }

    Ok(SearchResult {
        best_prt: best_chrom.to_prt_set()?,
        best_merit,
        merit_history: history,
        evaluations,
    })
}

/// C(n, m), or None if it overflows u128.
pub fn binomial(n: usize, m: usize) -> Option<u128> {
    if m > n {
        return Some(0);
    }
    let m = m.min(n - m);
    let mut value: u128 = 1;
    for k in 0..m {
        value = value.checked_mul((n - k) as u128)?;
        value /= (k + 1) as u128;
    }
    Some(value)
}

pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 1_000_000;

/// Globally optimal PRT set by full enumeration; ties resolve to the
/// lexicographically smallest index set.
pub fn exhaustive_search<T: Scalar>(n_tones: usize, prt_size: usize) -> Result<SearchResult<T>> {
    exhaustive_search_with_budget(n_tones, prt_size, DEFAULT_EXHAUSTIVE_BUDGET)
}

pub fn exhaustive_search_with_budget<T: Scalar>(
    n_tones: usize,
    prt_size: usize,
    budget: u128,
) -> Result<SearchResult<T>> {
    if prt_size == 0 || prt_size >= n_tones {
        return Err(Error::invalid("require 0 < M < N"));
    }
    let combinations = binomial(n_tones, prt_size);
    if combinations.is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded {
            n: n_tones,
            m: prt_size,
            combinations,
            budget,
        });
    }

    let evaluator = MeritEvaluator::<T>::new(n_tones);
    let mut current: Vec<usize> = (0..prt_size).collect();
    let mut best: Option<(T, Vec<usize>)> = None;
    let mut evaluations = 0u64;

    const CHUNK: usize = 2048;
    let mut batch: Vec<Vec<usize>> = Vec::with_capacity(CHUNK);
    let mut done = false;
    while !done {
        batch.clear();
        while batch.len() < CHUNK {
            batch.push(current.clone());
            if !next_combination(&mut current, n_tones) {
                done = true;
                break;
            }
        }
        let merits: Vec<T> = batch
            .par_iter()
            .map(|c| evaluator.merit_of_indices(c))
            .collect();
        evaluations += batch.len() as u64;
        for (candidate, merit) in batch.iter().zip(merits) {
            // lexicographic enumeration + strict improvement = lex-smallest tie-break
            let improves = match &best {
                None => true,
                Some((bm, _)) => merit < *bm,
            };
            if improves {
                best = Some((merit, candidate.clone()));
            }
        }
    }

    let (best_merit, indices) = best.expect("at least one combination");
    Ok(SearchResult {
        best_prt: PrtSet::new(indices, n_tones)?,
        best_merit,
        merit_history: vec![best_merit],
        evaluations,
    })
}

/// Advances to the next M-combination of [0, n) in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let m = combo.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if combo[i] < n - m + i {
            combo[i] += 1;
            for j in i + 1..m {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::fixtures;

    #[test]
    fn consecutive_matches_fixture() {
        let prt = consecutive_prt(512, 32, 225).unwrap();
        assert_eq!(prt, fixtures::cs_prt());
        let small = consecutive_prt(8, 3, 0).unwrap();
        assert_eq!(small.indices(), &[0, 1, 2]);
        let wrapped = consecutive_prt(8, 3, 7).unwrap();
        assert_eq!(wrapped.indices(), &[0, 1, 7]);
        assert!(consecutive_prt(8, 8, 0).is_err());
    }

    #[test]
    fn equally_spaced_matches_fixture() {
        let prt = equally_spaced_prt(512, 32, 15).unwrap();
        assert_eq!(prt, fixtures::es_prt());
        let small = equally_spaced_prt(8, 2, 0).unwrap();
        assert_eq!(small.indices(), &[0, 4]);
        assert!(equally_spaced_prt(8, 3, 0).is_err());
    }

    #[test]
    fn equally_spaced_merit_is_one_for_any_offset() {
        for offset in [0usize, 3, 15, 100] {
            let prt = equally_spaced_prt(512, 32, offset).unwrap();
            let m: f64 = crate::kernel::merit(&prt);
            assert!((m - 1.0).abs() < 1e-9, "offset {offset}: {m}");
        }
    }

    #[test]
    fn random_search_single_trial_returns_that_sample() {
        let mut rng = master_rng(5);
        let result = random_search::<f64>(16, 4, 1, &mut rng).unwrap();
        assert_eq!(result.evaluations, 1);
        assert_eq!(result.merit_history.len(), 1);
        let direct: f64 = crate::kernel::merit(&result.best_prt);
        assert!((result.best_merit - direct).abs() < 1e-12);
    }

    #[test]
    fn crossover_of_identical_parents_is_identity() {
        let a = Chromosome::from_indices(&[1, 3, 5], 8);
        let mut rng = master_rng(0);
        let (c, d) = crossover(&a, &a, 4, &mut rng);
        assert_eq!(c, a);
        assert_eq!(d, a);
    }

    #[test]
    fn crossover_with_no_ones_crossing_needs_no_repair() {
        // all ones sit right of the cut in both parents
        let a = Chromosome::from_indices(&[4, 5], 8);
        let b = Chromosome::from_indices(&[6, 7], 8);
        let mut rng = master_rng(0);
        let (c, d) = crossover(&a, &b, 3, &mut rng);
        assert_eq!(c, a);
        assert_eq!(d, b);
    }

    #[test]
    fn crossover_repairs_unbalanced_offspring() {
        // M=6 parents cut mid-vector so one-counts differ before repair
        let a = Chromosome::from_indices(&[0, 1, 2, 3, 4, 5], 16);
        let b = Chromosome::from_indices(&[10, 11, 12, 13, 14, 15], 16);
        let mut rng = master_rng(1);
        let (c, d) = crossover(&a, &b, 8, &mut rng);
        assert_eq!(c.ones(), 6);
        assert_eq!(d.ones(), 6);
    }

    #[test]
    fn mutate_zero_probability_is_identity() {
        let a = Chromosome::from_indices(&[0, 2, 9], 16);
        let mut rng = master_rng(3);
        assert_eq!(mutate(&a, 0.0, &mut rng), a);
    }

    #[test]
    fn mutate_probability_one_flips_everything_then_repairs() {
        let a = Chromosome::from_indices(&[0, 1, 2], 16);
        let mut rng = master_rng(4);
        let m = mutate(&a, 1.0, &mut rng);
        assert_eq!(m.ones(), 3);
        // with every bit flipped, surviving ones come from the complement
        for i in m.to_indices() {
            assert!(!a.bits()[i]);
        }
    }

    #[test]
    fn mean_flip_count_matches_binomial_mean() {
        let n = 512;
        let p = 0.05;
        let mut rng = master_rng(9);
        let bits = Chromosome::random(n, 32, &mut rng);
        let mut total = 0usize;
        let trials = 10_000;
        for _ in 0..trials {
            let flipped = flip_bits(bits.bits(), p, &mut rng);
            total += flipped
                .iter()
                .zip(bits.bits())
                .filter(|(a, b)| a != b)
                .count();
        }
        let mean = total as f64 / trials as f64;
        assert!((mean - 25.6).abs() < 1.0, "mean flips {mean}");
    }

    #[test]
    fn repair_is_minimal_and_directional() {
        let mut rng = master_rng(6);
        let feasible = Chromosome::from_indices(&[1, 2, 3], 10);
        assert_eq!(repair(&feasible, 3, &mut rng), feasible);

        let surplus = Chromosome::from_indices(&[0, 1, 2, 3, 4], 10);
        let repaired = repair(&surplus, 3, &mut rng);
        assert_eq!(repaired.ones(), 3);
        for i in repaired.to_indices() {
            assert!(surplus.bits()[i], "removal-only repair");
        }

        let deficit = Chromosome::from_indices(&[7], 10);
        let repaired = repair(&deficit, 3, &mut rng);
        assert_eq!(repaired.ones(), 3);
        assert!(
            repaired.bits()[7],
            "addition-only repair keeps existing ones"
        );
    }

    #[test]
    fn ga_with_zero_generations_returns_initial_best() {
        let mut cfg = GaConfig::default_for(16, 4, 11);
        cfg.max_iterations = 0;
        cfg.population_size = 8;
        let result = ga_search::<f64>(&cfg).unwrap();
        assert_eq!(result.evaluations, 8);
        assert_eq!(result.merit_history.len(), 1);
        assert!((result.merit_history[0] - result.best_merit).abs() < 1e-12);
    }

    #[test]
    fn ga_is_deterministic_per_config() {
        let mut cfg = GaConfig::default_for(32, 6, 123);
        cfg.max_iterations = 20;
        cfg.population_size = 10;
        let a = ga_search::<f64>(&cfg).unwrap();
        let b = ga_search::<f64>(&cfg).unwrap();
        assert_eq!(a.best_prt, b.best_prt);
        assert_eq!(a.best_merit, b.best_merit);
        assert_eq!(a.merit_history, b.merit_history);
    }

    #[test]
    fn ga_merit_history_is_non_increasing() {
        let mut cfg = GaConfig::default_for(64, 8, 77);
        cfg.max_iterations = 40;
        cfg.population_size = 12;
        let result = ga_search::<f64>(&cfg).unwrap();
        for w in result.merit_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
        assert_eq!(result.evaluations, 12 * 41);
        let recomputed: f64 = crate::kernel::merit(&result.best_prt);
        assert!((recomputed - result.best_merit).abs() < 1e-12);
    }

    #[test]
    fn ga_early_stop_threshold() {
        let mut cfg = GaConfig::default_for(16, 4, 2);
        cfg.merit_threshold = Some(1.0); // any feasible set satisfies this
        let result = ga_search::<f64>(&cfg).unwrap();
        assert_eq!(result.evaluations, 30); // stopped right after init
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 3), Some(4));
        assert_eq!(binomial(8, 2), Some(28));
        assert_eq!(binomial(16, 4), Some(1820));
        assert_eq!(binomial(512, 2), Some(130816));
        assert_eq!(binomial(512, 32), None); // overflows u128
    }

    #[test]
    fn exhaustive_tiny_instances_match_direct_enumeration() {
        // frozen from an independent direct-summation enumeration
        let r = exhaustive_search::<f64>(4, 3).unwrap();
        assert_eq!(r.evaluations, 4);
        assert_eq!(r.best_prt.indices(), &[0, 1, 2]);
        assert!((r.best_merit - 1.0 / 3.0).abs() < 1e-10);

        // many sets tie at cos(pi/8) under the dihedral symmetry, so assert
        // the frozen optimum value and that the winner achieves it
        let r = exhaustive_search::<f64>(8, 2).unwrap();
        assert_eq!(r.evaluations, 28);
        assert!((r.best_merit - 0.923879532511).abs() < 1e-10);
        let recomputed: f64 = crate::kernel::merit(&r.best_prt);
        assert!((recomputed - r.best_merit).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_16_choose_4_golden() {
        // the optimum merit is frozen from an independent direct-summation
        // enumeration; 64 sets tie at it (shift/reversal symmetry class), so
        // the winning set is only pinned up to float noise in the tie-break
        let r = exhaustive_search::<f64>(16, 4).unwrap();
        assert_eq!(r.evaluations, 1820);
        assert!((r.best_merit - 0.581711567401).abs() < 1e-9);
        let recomputed: f64 = crate::kernel::merit(&r.best_prt);
        assert!((recomputed - r.best_merit).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_refuses_over_budget() {
        match exhaustive_search::<f64>(512, 32) {
            Err(Error::BudgetExceeded { combinations, .. }) => {
                assert_eq!(combinations, None); // C(512,32) overflows u128
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
        match exhaustive_search::<f64>(64, 5) {
            Err(e @ Error::BudgetExceeded { .. }) => {
                assert!(e.to_string().contains("7624512"), "{e}");
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn exhaustive_beats_every_baseline() {
        let optimum = exhaustive_search::<f64>(16, 4).unwrap().best_merit;
        let cs: f64 = crate::kernel::merit(&consecutive_prt(16, 4, 3).unwrap());
        let es: f64 = crate::kernel::merit(&equally_spaced_prt(16, 4, 1).unwrap());
        let mut rng = master_rng(8);
        let rs = random_search::<f64>(16, 4, 50, &mut rng)
            .unwrap()
            .best_merit;
        assert!(optimum <= cs + 1e-12);
        assert!(optimum <= es + 1e-12);
        assert!(optimum <= rs + 1e-12);
    }

    #[test]
    fn random_search_at_experiment_scale_beats_loose_bound() {
        // best of 1e5 random 32-subsets of 512 tones lands near 0.32
        let mut rng = master_rng(42);
        let result = random_search::<f64>(512, 32, 100_000, &mut rng).unwrap();
        assert!(
            result.best_merit <= 0.36,
            "best merit {:.4} above the loose bound",
            result.best_merit
        );
        assert_eq!(result.evaluations, 100_000);
    }

    #[test]
    fn seeded_random_search_finds_small_optimum() {
        // 36400 trials over 1820 subsets: covers the optimum with near
        // certainty; seed frozen after checking it does
        let mut rng = master_rng(1);
        let result = random_search::<f64>(16, 4, 1820 * 20, &mut rng).unwrap();
        assert!((result.best_merit - 0.581711567401).abs() < 1e-10);
    }
}
