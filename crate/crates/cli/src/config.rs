use std::path::{Path, PathBuf};

use serde::Deserialize;

use ontocq_core::analysis::EfficiencyMode;
use ontocq_core::fol::SymbolMap;
use ontocq_core::harness::ProverConfig;
use ontocq_core::kb::{IngestInputs, MappingSyntax};
use ontocq_core::statement::StatementOptions;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub wordnet_dir: Option<PathBuf>,
    pub morphosemantic: Option<PathBuf>,
    #[serde(default)]
    pub mapping_files: Vec<PathBuf>,
    #[serde(default)]
    pub taxonomy_files: Vec<PathBuf>,
    #[serde(default)]
    pub core_files: Vec<PathBuf>,
    pub corrections: Option<PathBuf>,
    /// TPTP axiom file the problems include.
    pub ontology_file: Option<PathBuf>,
    /// Include path written into problem files; defaults to `ontology_file`.
    pub ontology_include: Option<String>,
    /// TOML or JSON symbol table merged into `[symbol_map]`.
    pub symbol_map: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    pub time_limit_s: Option<u64>,
    pub mem_limit_mib: Option<u64>,
    pub rlimit_mib: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSettings {
    #[serde(default)]
    pub efficiency_mode: EfficiencyMode,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub inputs: Inputs,
    #[serde(default)]
    pub provers: Vec<ProverConfig>,
    #[serde(default)]
    pub limits: Limits,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub symbol_map: SymbolMap,
    pub mapping_syntax: Option<MappingSyntax>,
    #[serde(default)]
    pub statement: StatementOptions,
    #[serde(default)]
    pub report: ReportSettings,
}

fn rebase(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, base: &Path) -> Result<RunConfig, String> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        let i = &mut cfg.inputs;
        for p in i
            .wordnet_dir
            .iter_mut()
            .chain(i.morphosemantic.iter_mut())
            .chain(i.corrections.iter_mut())
        {
            rebase(base, p);
        }
        for p in i.ontology_file.iter_mut().chain(i.symbol_map.iter_mut()) {
            rebase(base, p);
        }
        for p in i
            .mapping_files
            .iter_mut()
            .chain(i.taxonomy_files.iter_mut())
            .chain(i.core_files.iter_mut())
        {
            rebase(base, p);
        }
        rebase(base, &mut cfg.output_dir);
        for p in &mut cfg.provers {
            if p.executable.components().count() > 1 {
                rebase(base, &mut p.executable);
            }
            if let Some(t) = cfg.limits.time_limit_s {
                p.time_limit_s = t;
            }
            if let Some(m) = cfg.limits.mem_limit_mib {
                p.mem_limit_mib = m;
            }
            if cfg.limits.rlimit_mib.is_some() {
                p.rlimit_mib = cfg.limits.rlimit_mib;
            }
        }
        if let Some(path) = cfg.inputs.symbol_map.clone() {
            let text =
                std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let extra: std::collections::BTreeMap<String, String> =
                if path.extension().is_some_and(|e| e == "json") {
                    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
                } else {
                    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
                };
            cfg.symbol_map.explicit.extend(extra);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        RunConfig::from_toml(&text, base)
    }

    /// Every referenced input path must exist.
    pub fn validate(&self) -> Result<(), String> {
        let i = &self.inputs;
        let singles = [
            &i.wordnet_dir,
            &i.morphosemantic,
            &i.corrections,
            &i.ontology_file,
            &i.symbol_map,
        ];
        let lists = i
            .mapping_files
            .iter()
            .chain(&i.taxonomy_files)
            .chain(&i.core_files);
        for p in singles.into_iter().flatten().chain(lists) {
            if !p.exists() {
                return Err(format!("input path {} does not exist", p.display()));
            }
        }
        let mut ids = std::collections::BTreeSet::new();
        for p in &self.provers {
            p.validate().map_err(|e| e.to_string())?;
            if !ids.insert(p.id.as_str()) {
                return Err(format!("prover id {} configured twice", p.id));
            }
            if p.executable.components().count() > 1 && !p.executable.exists() {
                return Err(format!(
                    "prover {}: executable {} does not exist",
                    p.id,
                    p.executable.display()
                ));
            }
        }
        Ok(())
    }

    pub fn ingest_inputs(&self) -> IngestInputs {
        let i = &self.inputs;
        IngestInputs {
            wordnet_dir: i.wordnet_dir.clone(),
            morphosemantic: i.morphosemantic.clone(),
            mapping_files: i.mapping_files.clone(),
            taxonomy_files: i.taxonomy_files.clone(),
            core_files: i.core_files.clone(),
            corrections: i.corrections.clone(),
            syntax: self.mapping_syntax.clone().unwrap_or_default(),
        }
    }

    pub fn ontology_include(&self) -> Option<String> {
        self.inputs.ontology_include.clone().or_else(|| {
            self.inputs
                .ontology_file
                .as_ref()
                .map(|p| p.to_string_lossy().into_owned())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_and_limits() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("onto.ax"), "fof(a, axiom, p).\n").unwrap();
        let text = r#"
output_dir = "out"
seed = 7

[inputs]
ontology_file = "onto.ax"

[limits]
time_limit_s = 10

[[provers]]
id = "vampire"
executable = "vampire"
args = ["-t", "{time_s}", "{problem}"]
time_limit_s = 600
mem_limit_mib = 2048
"#;
        let cfg = RunConfig::from_toml(text, dir.path()).unwrap();
        assert_eq!(cfg.output_dir, dir.path().join("out"));
        assert_eq!(cfg.provers[0].time_limit_s, 10);
        assert_eq!(cfg.provers[0].executable, PathBuf::from("vampire"));
        assert_eq!(
            cfg.ontology_include().unwrap(),
            dir.path().join("onto.ax").to_string_lossy()
        );

        let missing = text.replace("onto.ax", "nope.ax");
        assert!(RunConfig::from_toml(&missing, dir.path())
            .unwrap_err()
            .contains("does not exist"));
        assert!(RunConfig::from_toml("output_dir = 3", dir.path()).is_err());
    }
}
