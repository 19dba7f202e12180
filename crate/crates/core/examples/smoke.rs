//! Scratch driver for calibrating the desk experiment.

use btevolve_core::experiment::{self, load_preset, select_best, Mode};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let gens: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);

    for mode in [Mode::Evolve, Mode::Baseline] {
        let mut loaded = load_preset("desk").unwrap();
        loaded.config.experiment.generations = gens;
        loaded.config.experiment.master_seed = seed;
        loaded.config.experiment.mode = mode;
        let t0 = std::time::Instant::now();
        let log = experiment::evolve(&loaded, None).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        println!("--- mode {mode:?} seed {seed} ({dt:.1}s)");
        for rec in log.records.iter().step_by((gens as usize / 10).max(1)) {
            println!(
                "gen {:4}  min {:8.1}  mean {:8.1}  max {:8.1}",
                rec.generation,
                rec.min(),
                rec.mean(),
                rec.max()
            );
        }
        let last = log.records.last().unwrap();
        println!(
            "final gen {}  mean {:.1}  max {:.1}",
            last.generation,
            last.mean(),
            last.max()
        );
        let best = select_best(&log).unwrap();
        let stats = experiment::evaluate(&best, &loaded, 10).unwrap();
        println!(
            "best-tree eval: median {:.1} iqr {:.1} mean {:.1} (size {})",
            stats.median,
            stats.iqr,
            stats.mean,
            best.size()
        );
    }
}
