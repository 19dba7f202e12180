//! Per-generation run records and their on-disk form: a summary CSV, a
//! per-member fitness CSV, and one best-tree file per generation, all
//! flushed incrementally so an interrupted run leaves a parseable log.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::chromosome::Chromosome;

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: u32,
    pub fitnesses: Vec<f64>,
    /// Index of the best member (ties broken by lower index).
    pub best_index: usize,
    /// Serialized form of the best member.
    pub best_tree: String,
}

impl GenerationRecord {
    pub fn new(generation: u32, fitnesses: Vec<f64>, population: &[Chromosome]) -> Self {
        assert_eq!(fitnesses.len(), population.len());
        let mut best_index = 0;
        for (i, &f) in fitnesses.iter().enumerate() {
            if f > fitnesses[best_index] {
                best_index = i;
            }
        }
        GenerationRecord {
            generation,
            fitnesses,
            best_index,
            best_tree: population[best_index].serialize(),
        }
    }

    pub fn min(&self) -> f64 {
        self.fitnesses.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.fitnesses.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.fitnesses.iter().sum::<f64>() / self.fitnesses.len() as f64
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunLog {
    pub seed: u64,
    pub records: Vec<GenerationRecord>,
}

/// Picks the best tree of a run: the highest-fitness member of the
/// generation with the highest average fitness. Average ties go to the later
/// generation; member ties to the lower index.
pub fn select_best(log: &RunLog) -> Option<Chromosome> {
    let mut chosen: Option<(f64, usize)> = None;
    for (i, rec) in log.records.iter().enumerate() {
        let mean = rec.mean();
        match chosen {
            Some((best_mean, _)) if mean < best_mean => {}
            _ => chosen = Some((mean, i)),
        }
    }
    let (_, idx) = chosen?;
    Some(
        Chromosome::deserialize(&log.records[idx].best_tree)
            .expect("logged trees always parse"),
    )
}

/// Incremental writer for the on-disk run log.
pub struct RunLogWriter {
    dir: PathBuf,
    summary: csv::Writer<File>,
    members: csv::Writer<File>,
}

impl RunLogWriter {
    pub fn create(dir: &Path, effective_config: &str, seed: u64) -> std::io::Result<RunLogWriter> {
        std::fs::create_dir_all(dir.join("best"))?;
        let mut meta = File::create(dir.join("config_effective.json"))?;
        meta.write_all(effective_config.as_bytes())?;
        let mut seed_file = File::create(dir.join("seed.txt"))?;
        writeln!(seed_file, "{seed}")?;
        let mut summary = csv::Writer::from_writer(File::create(dir.join("run_log.csv"))?);
        summary.write_record(["generation", "min", "mean", "max"])?;
        summary.flush()?;
        let mut members = csv::Writer::from_writer(File::create(dir.join("fitness.csv"))?);
        members.write_record(["generation", "member", "fitness"])?;
        members.flush()?;
        Ok(RunLogWriter {
            dir: dir.to_path_buf(),
            summary,
            members,
        })
    }

    pub fn append(&mut self, record: &GenerationRecord) -> std::io::Result<()> {
        self.summary.write_record([
            record.generation.to_string(),
            format!("{}", record.min()),
            format!("{}", record.mean()),
            format!("{}", record.max()),
        ])?;
        self.summary.flush()?;
        for (member, fitness) in record.fitnesses.iter().enumerate() {
            self.members.write_record([
                record.generation.to_string(),
                member.to_string(),
                format!("{fitness}"),
            ])?;
        }
        self.members.flush()?;
        let tree_path = self
            .dir
            .join("best")
            .join(format!("gen_{:04}.btree.json", record.generation));
        std::fs::write(tree_path, &record.best_tree)?;
        Ok(())
    }

    pub fn write_best(&self, tree: &Chromosome) -> std::io::Result<()> {
        std::fs::write(self.dir.join("best_tree.btree.json"), tree.serialize())
    }
}

/// Reads the per-member fitness CSV back into a `RunLog` (without trees).
/// Used by tooling and the durability tests.
pub fn read_fitness_csv(path: &Path) -> std::io::Result<Vec<(u32, usize, f64)>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        let parse = |i: usize| -> Result<f64, std::io::Error> {
            record
                .get(i)
                .unwrap_or("")
                .parse::<f64>()
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
        };
        rows.push((parse(0)? as u32, parse(1)? as usize, parse(2)?));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromosome::{ChromosomeNode, CompositeKind};

    fn tree(tag: u64) -> Chromosome {
        let mut c = Chromosome::new(
            ChromosomeNode::composite(CompositeKind::Selector)
                .with_children(vec![ChromosomeNode::mapped("idle")]),
        );
        c.lineage_id = tag;
        c
    }

    fn log_from_means(means: &[&[f64]]) -> RunLog {
        let mut log = RunLog::default();
        for (g, fits) in means.iter().enumerate() {
            let pop: Vec<Chromosome> = (0..fits.len()).map(|i| tree((g * 100 + i) as u64)).collect();
            log.records
                .push(GenerationRecord::new(g as u32, fits.to_vec(), &pop));
        }
        log
    }

    #[test]
    fn single_generation_picks_argmax() {
        let log = log_from_means(&[&[1.0, 9.0, 3.0]]);
        let best = select_best(&log).unwrap();
        assert_eq!(best.lineage_id, 1);
    }

    #[test]
    fn synthetic_means_pick_generation_one() {
        let log = log_from_means(&[&[1.0, 1.0], &[9.0, 9.0], &[3.0, 3.0]]);
        let best = select_best(&log).unwrap();
        assert_eq!(best.lineage_id, 100);
    }

    #[test]
    fn mean_ties_go_to_later_generation() {
        let log = log_from_means(&[&[5.0, 5.0], &[5.0, 5.0]]);
        let best = select_best(&log).unwrap();
        assert_eq!(best.lineage_id, 100);
    }

    #[test]
    fn member_ties_go_to_lower_index() {
        let log = log_from_means(&[&[7.0, 7.0, 2.0]]);
        let best = select_best(&log).unwrap();
        assert_eq!(best.lineage_id, 0);
    }

    #[test]
    fn record_stats() {
        let pop: Vec<Chromosome> = (0..3).map(|i| tree(i as u64)).collect();
        let rec = GenerationRecord::new(0, vec![1.0, -2.0, 4.0], &pop);
        assert_eq!(rec.min(), -2.0);
        assert_eq!(rec.max(), 4.0);
        assert_eq!(rec.mean(), 1.0);
        assert_eq!(rec.best_index, 2);
    }
}
