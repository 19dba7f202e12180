//! Scratch driver: inspect what evolution finds mid-run.

use btevolve_core::chromosome::Chromosome;
use btevolve_core::dot::to_outline;
use btevolve_core::experiment::{self, evaluate, load_preset, Mode};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let gens: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(60);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut loaded = load_preset("desk").unwrap();
    loaded.config.experiment.generations = gens;
    loaded.config.experiment.master_seed = seed;
    loaded.config.experiment.mode = Mode::Evolve;
    let log = experiment::evolve(&loaded, None).unwrap();

    for rec in log.records.iter() {
        if rec.generation % (gens / 6).max(1) != 0 {
            continue;
        }
        let best = Chromosome::deserialize(&rec.best_tree).unwrap();
        let stats = evaluate(&best, &loaded, 6).unwrap();
        let mut sorted = rec.fitnesses.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        println!(
            "gen {:3} mean {:8.1} | in-gen best {:8.1} | homo median {:8.1} | fitness spread {:?}",
            rec.generation,
            rec.mean(),
            sorted.last().unwrap(),
            stats.median,
            sorted.iter().map(|f| *f as i64).collect::<Vec<_>>()
        );
    }
    let best = experiment::select_best(&log).unwrap();
    println!("\nselected best (size {}):\n{}", best.size(), to_outline(&best));
    let stats = evaluate(&best, &loaded, 10).unwrap();
    println!("homogeneous eval: median {:.1} mean {:.1}", stats.median, stats.mean);
}
