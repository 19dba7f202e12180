//! Scratch driver: first-third OLS slope of mean fitness, both modes.

use btevolve_core::experiment::{self, load_preset, stats, Mode};

fn main() {
    let gens: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(150);
    for mode in [Mode::Evolve, Mode::Baseline] {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for seed in 1..=3u64 {
            let mut loaded = load_preset("desk").unwrap();
            loaded.config.experiment.generations = gens;
            loaded.config.experiment.master_seed = seed;
            loaded.config.experiment.mode = mode;
            let log = experiment::evolve(&loaded, None).unwrap();
            let third = log.records.len() / 3;
            for rec in &log.records[..third] {
                xs.push(rec.generation as f64);
                ys.push(rec.mean());
            }
        }
        let (slope, se) = stats::ols_slope(&xs, &ys);
        println!(
            "{mode:?}: slope {slope:.4} +- {:.4} (95% CI [{:.4}, {:.4}])",
            1.96 * se,
            slope - 1.96 * se,
            slope + 1.96 * se
        );
    }
}
