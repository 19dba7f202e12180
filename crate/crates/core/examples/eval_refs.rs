//! Scratch driver: evaluate the bundled trees on the desk preset.

use btevolve_core::experiment::{evaluate, load_preset, trees};
use btevolve_core::fitness::measures;
use btevolve_core::types::AgentId;

fn main() {
    let loaded = load_preset("desk").unwrap();
    for (name, tree) in trees::bundled() {
        let stats = evaluate(&tree, &loaded, 10).unwrap();
        println!(
            "{name:28} median {:8.1} iqr {:7.1} mean {:8.1} min {:8.1} max {:8.1} size {}",
            stats.median, stats.iqr, stats.mean, stats.min, stats.max, tree.size()
        );
    }
    // Ledger detail for the patrol reference, one episode.
    let tree = trees::reference_chase_patrol();
    let cfg = &loaded.config;
    let pop = vec![tree.clone(); cfg.experiment.zombie_count];
    let out = btevolve_core::arena::run_episode(
        &pop,
        &loaded.map,
        &cfg.sim,
        &cfg.library,
        &cfg.fitness,
        cfg.experiment.human_count,
        12345,
        false,
    )
    .unwrap();
    for i in 0..3u32 {
        let id = AgentId(i);
        print!("zombie {i}:");
        for key in measures::ALL {
            print!("  {key}={:.1}", out.ledger.value(id, key));
        }
        println!();
    }
}
