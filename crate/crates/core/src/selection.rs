//! Tournament parent selection, elitism, generational replacement, and the
//! fitness-blind random-baseline generation step.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chromosome::Chromosome;
use crate::genetic_ops::{make_child, MutatorConfig};
use crate::node_library::NodeLibrary;
use crate::rng;

fn default_tournament_k() -> usize {
    4
}
fn default_elitism_rate() -> f64 {
    0.12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    #[serde(default = "default_tournament_k")]
    pub tournament_k: usize,
    #[serde(default = "default_elitism_rate")]
    pub elitism_rate: f64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            tournament_k: default_tournament_k(),
            elitism_rate: default_elitism_rate(),
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self, population_size: usize) -> Result<(), String> {
        if self.tournament_k == 0 || self.tournament_k > population_size {
            return Err(format!(
                "tournament_k must lie in 1..={population_size}, got {}",
                self.tournament_k
            ));
        }
        if !(0.0..1.0).contains(&self.elitism_rate) {
            return Err(format!(
                "elitism_rate must lie in [0, 1), got {}",
                self.elitism_rate
            ));
        }
        Ok(())
    }
}

/// Picks `k` members uniformly without replacement and returns the index of
/// the best fitness among them; exact ties break uniformly at random.
pub fn tournament_select(fitnesses: &[f64], k: usize, rng: &mut impl Rng) -> usize {
    assert!(!fitnesses.is_empty());
    assert!(k >= 1 && k <= fitnesses.len());
    // Partial Fisher-Yates over an index vector.
    let mut indices: Vec<usize> = (0..fitnesses.len()).collect();
    let mut best: Vec<usize> = Vec::with_capacity(4);
    let mut best_fitness = f64::NEG_INFINITY;
    for slot in 0..k {
        let pick = rng.gen_range(slot..indices.len());
        indices.swap(slot, pick);
        let entrant = indices[slot];
        let f = fitnesses[entrant];
        if f > best_fitness {
            best_fitness = f;
            best.clear();
            best.push(entrant);
        } else if f == best_fitness {
            best.push(entrant);
        }
    }
    if best.len() == 1 {
        best[0]
    } else {
        best[rng.gen_range(0..best.len())]
    }
}

/// Ranks population indices by descending fitness, ties broken by lower
/// index.
fn fitness_ranking(fitnesses: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| {
        fitnesses[b]
            .partial_cmp(&fitnesses[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Number of elite slots for a population of `n`.
pub fn elite_count(rate: f64, n: usize) -> usize {
    (rate * n as f64).ceil() as usize
}

/// Full generational replacement: the top `ceil(rate * N)` members are
/// copied unmodified into the leading slots, every remaining slot is a child
/// of two independent tournament picks.
pub fn next_generation(
    pop: &[Chromosome],
    fitnesses: &[f64],
    sel: &SelectionConfig,
    mutators: &MutatorConfig,
    lib: &NodeLibrary,
    rng: &mut impl Rng,
) -> Vec<Chromosome> {
    assert_eq!(pop.len(), fitnesses.len());
    let n = pop.len();
    let elites = elite_count(sel.elitism_rate, n).min(n);
    let ranking = fitness_ranking(fitnesses);

    let mut next: Vec<Chromosome> = Vec::with_capacity(n);
    for &idx in ranking.iter().take(elites) {
        next.push(pop[idx].deep_copy());
    }
    // Per-slot derived streams keep results independent of evaluation order.
    let slot_base: u64 = rng.gen();
    for slot in elites..n {
        let mut slot_rng = rng::stream(slot_base, "reproduce", slot as u64);
        let primary = tournament_select(fitnesses, sel.tournament_k, &mut slot_rng);
        let donor = tournament_select(fitnesses, sel.tournament_k, &mut slot_rng);
        next.push(make_child(
            &pop[primary],
            &pop[donor],
            lib,
            mutators,
            &mut slot_rng,
        ));
    }
    next
}

/// The random-baseline step: member `i` of the output reproduces `pop[i]`
/// against a uniformly random donor. No fitness input exists, so neither
/// selection pressure nor elitism can occur.
pub fn next_generation_random(
    pop: &[Chromosome],
    mutators: &MutatorConfig,
    lib: &NodeLibrary,
    rng: &mut impl Rng,
) -> Vec<Chromosome> {
    assert!(!pop.is_empty());
    let slot_base: u64 = rng.gen();
    (0..pop.len())
        .map(|slot| {
            let mut slot_rng = rng::stream(slot_base, "baseline", slot as u64);
            let donor = slot_rng.gen_range(0..pop.len());
            make_child(&pop[slot], &pop[donor], lib, mutators, &mut slot_rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::node_library::default_roster;
    use crate::testkit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exhaustive_tournament_always_selects_argmax() {
        let fitnesses = vec![3.0, 9.0, -2.0, 4.5, 9.0, 1.0];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2_000 {
            let winner = tournament_select(&fitnesses, fitnesses.len(), &mut rng);
            assert!(winner == 1 || winner == 4);
        }
    }

    #[test]
    fn single_entrant_tournament_is_uniform() {
        let fitnesses = vec![0.0; 10];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let draws = 20_000;
        let mut counts = [0usize; 10];
        for _ in 0..draws {
            counts[tournament_select(&fitnesses, 1, &mut rng)] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / draws as f64;
            assert!((freq - 0.10).abs() < 0.007, "index {i} freq {freq}");
        }
    }

    #[test]
    fn tournament_combinatorial_frequency() {
        // Distinct fitnesses 1..8, k=4: best wins C(7,3)/C(8,4) = 0.5.
        let fitnesses: Vec<f64> = (1..=8).map(|v| v as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 40_000;
        let mut hits = 0usize;
        for _ in 0..draws {
            if tournament_select(&fitnesses, 4, &mut rng) == 7 {
                hits += 1;
            }
        }
        let freq = hits as f64 / draws as f64;
        assert!((freq - 0.5).abs() < 0.008, "freq {freq}");
    }

    #[test]
    fn selection_frequency_monotone_in_rank() {
        let fitnesses: Vec<f64> = (0..10).map(|v| v as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let draws = 50_000;
        let mut counts = [0usize; 10];
        for _ in 0..draws {
            counts[tournament_select(&fitnesses, 4, &mut rng)] += 1;
        }
        for i in 1..10 {
            assert!(
                counts[i] + 200 >= counts[i - 1],
                "rank {i}: {} < {}",
                counts[i],
                counts[i - 1]
            );
        }
    }

    fn small_population(n: usize, seed: u64) -> Vec<Chromosome> {
        let lib = default_roster();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| testkit::random_chromosome(&lib, 3, &mut rng))
            .collect()
    }

    #[test]
    fn degenerate_elitism_copies_sorted_population() {
        let lib = default_roster();
        let pop = small_population(8, 5);
        let fitnesses: Vec<f64> = vec![3.0, 8.0, 1.0, 5.0, 7.0, 2.0, 6.0, 4.0];
        let sel = SelectionConfig {
            tournament_k: 4,
            elitism_rate: 1.0 - 1e-9,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let next = next_generation(&pop, &fitnesses, &sel, &MutatorConfig::default(), &lib, &mut rng);
        assert_eq!(next.len(), 8);
        let expected_order = [1usize, 4, 6, 3, 7, 0, 5, 2];
        for (slot, &src) in expected_order.iter().enumerate() {
            assert_eq!(next[slot].serialize(), pop[src].serialize());
        }
    }

    #[test]
    fn elite_count_matches_rate() {
        assert_eq!(elite_count(0.12, 50), 6);
        assert_eq!(elite_count(0.12, 12), 2);
        assert_eq!(elite_count(0.0, 50), 0);
    }

    #[test]
    fn zero_prob_children_are_members() {
        let lib = default_roster();
        let pop = small_population(10, 7);
        let fitnesses: Vec<f64> = (0..10).map(|v| v as f64).collect();
        let sel = SelectionConfig::default();
        let mutators = MutatorConfig {
            crossover_prob: 0.0,
            point_mutator_prob: 0.0,
            ..MutatorConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let next = next_generation(&pop, &fitnesses, &sel, &mutators, &lib, &mut rng);
        let members: Vec<String> = pop.iter().map(|c| c.serialize()).collect();
        for child in &next {
            assert!(members.contains(&child.serialize()));
        }
    }

    #[test]
    fn random_baseline_zero_probs_is_position_identity() {
        let lib = default_roster();
        let pop = small_population(6, 9);
        let mutators = MutatorConfig {
            crossover_prob: 0.0,
            point_mutator_prob: 0.0,
            ..MutatorConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let next = next_generation_random(&pop, &mutators, &lib, &mut rng);
        assert_eq!(next.len(), pop.len());
        for (a, b) in next.iter().zip(pop.iter()) {
            assert_eq!(a.serialize(), b.serialize());
        }
    }

    #[test]
    fn population_size_invariant() {
        let lib = default_roster();
        let pop = small_population(9, 11);
        let fitnesses: Vec<f64> = (0..9).map(|v| (v * v) as f64).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let next = next_generation(
            &pop,
            &fitnesses,
            &SelectionConfig::default(),
            &MutatorConfig::default(),
            &lib,
            &mut rng,
        );
        assert_eq!(next.len(), 9);
        let random = next_generation_random(&pop, &MutatorConfig::default(), &lib, &mut rng);
        assert_eq!(random.len(), 9);
    }
}
