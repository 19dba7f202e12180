//! Keeps the shipped files under `configs/` in lockstep with the in-code
//! defaults. Run with `REGEN_BUNDLED=1` to rewrite them after changing a
//! default.

use std::path::PathBuf;

use btevolve_core::arena::ArenaMap;
use btevolve_core::experiment::{load_experiment, presets, trees};

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join("configs")
}

fn bundle() -> Vec<(PathBuf, String)> {
    let dir = configs_dir();
    let mut files = Vec::new();
    for (name, config) in presets::all() {
        let mut text = serde_json::to_string_pretty(&config).expect("config serializes");
        text.push('\n');
        files.push((dir.join(format!("{name}.json")), text));
    }
    for (name, tree) in trees::bundled() {
        files.push((
            dir.join("trees").join(format!("{name}.btree.json")),
            tree.serialize(),
        ));
    }
    for name in ["small", "medium", "large"] {
        let map = ArenaMap::preset(name).expect("bundled preset");
        files.push((dir.join("maps").join(format!("{name}.map")), map.to_text()));
    }
    files
}

#[test]
fn bundled_files_match_code_defaults() {
    let regen = std::env::var_os("REGEN_BUNDLED").is_some();
    for (path, expected) in bundle() {
        if regen {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &expected).unwrap();
            continue;
        }
        let actual = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing bundled file {}: {e}", path.display()));
        assert_eq!(actual, expected, "{} drifted from defaults", path.display());
    }
}

#[test]
fn bundled_configs_load_and_validate() {
    for (name, _) in presets::all() {
        let path = configs_dir().join(format!("{name}.json"));
        if !path.exists() {
            // First build before regeneration; the other test reports it.
            continue;
        }
        let loaded = load_experiment(&path, &[]).unwrap_or_else(|e| panic!("{name}: {e}"));
        loaded.config.validate().unwrap();
        // The referenced initial tree must compile against the library.
        btevolve_core::behavior_tree::compile(&loaded.initial_tree, &loaded.config.library)
            .unwrap();
    }
}

#[test]
fn bundled_maps_load_from_files() {
    for name in ["small", "medium", "large"] {
        let path = configs_dir().join("maps").join(format!("{name}.map"));
        if !path.exists() {
            continue;
        }
        let map = ArenaMap::from_file(&path).unwrap();
        assert_eq!(map, ArenaMap::preset(name).unwrap());
    }
}
