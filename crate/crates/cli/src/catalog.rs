//! Named signatures, algebras, varieties and ordered algebras loaded from a
//! directory with subfolders `signatures/`, `algebras/`, `varieties/` and
//! `ordered/`, each holding `*.json` files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use sha2::{Digest, Sha256};

use dualram_core::algebras::{free_algebra, FiniteAlgebra, Variety};
use dualram_core::ordered::{ordered_free, OrderedAlgebra};
use dualram_core::ramsey::{Category, Object};
use dualram_core::terms::Signature;

use crate::io::{AlgebraFile, GeneratorRef, SignatureFile, VarietyFile};

/// Environment variable naming the default catalog directory.
pub const CATALOG_ENV: &str = "RAMSEY_WORKBENCH_CATALOG";

/// The catalog shipped with the sources.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Catalog {
    pub signatures: BTreeMap<String, Signature>,
    pub algebras: BTreeMap<String, FiniteAlgebra>,
    pub varieties: BTreeMap<String, Variety>,
    pub ordered: BTreeMap<String, OrderedAlgebra>,
    /// SHA-256 over every file read, in path order.
    pub digest: String,
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

impl Catalog {
    /// `--catalog`, else the environment variable, else the bundled catalog.
    pub fn locate(explicit: Option<&Path>) -> PathBuf {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from))
            .unwrap_or_else(bundled_dir)
    }

    pub fn load(dir: &Path) -> Result<Catalog> {
        if !dir.is_dir() {
            bail!("catalog directory {} does not exist", dir.display());
        }
        let mut hasher = Sha256::new();
        let mut read = |path: &Path| -> Result<String> {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            hasher.update(path.strip_prefix(dir).unwrap_or(path).to_string_lossy().as_bytes());
            hasher.update(text.as_bytes());
            Ok(text)
        };
        let mut cat = Catalog::default();
        for path in json_files(&dir.join("signatures"))? {
            let file: SignatureFile = serde_json::from_str(&read(&path)?).with_context(|| format!("parsing {}", path.display()))?;
            let name = if file.name.is_empty() { stem(&path) } else { file.name };
            cat.signatures.insert(name, file.signature);
        }
        for path in json_files(&dir.join("algebras"))? {
            let file: AlgebraFile = serde_json::from_str(&read(&path)?).with_context(|| format!("parsing {}", path.display()))?;
            let name = if file.name.is_empty() { stem(&path) } else { file.name.clone() };
            let algebra = file.to_algebra(&cat.signatures).with_context(|| format!("loading {}", path.display()))?;
            cat.algebras.insert(name, algebra);
        }
        for path in json_files(&dir.join("varieties"))? {
            let file: VarietyFile = serde_json::from_str(&read(&path)?).with_context(|| format!("parsing {}", path.display()))?;
            let generators = file
                .generators
                .iter()
                .map(|g| match g {
                    GeneratorRef::Named(n) => cat.algebras.get(n).cloned().ok_or_else(|| anyhow!("unknown algebra `{n}`")),
                    GeneratorRef::Inline(a) => a.to_algebra(&cat.signatures),
                })
                .collect::<Result<Vec<_>>>()
                .with_context(|| format!("loading {}", path.display()))?;
            let variety = Variety::new(generators).with_context(|| format!("loading {}", path.display()))?;
            cat.varieties.insert(file.name, variety);
        }
        for path in json_files(&dir.join("ordered"))? {
            let file: AlgebraFile = serde_json::from_str(&read(&path)?).with_context(|| format!("parsing {}", path.display()))?;
            let name = if file.name.is_empty() { stem(&path) } else { file.name.clone() };
            let ordered = file.to_ordered(&cat.signatures).with_context(|| format!("loading {}", path.display()))?;
            cat.ordered.insert(name, ordered);
        }
        cat.digest = hex::encode(hasher.finalize());
        Ok(cat)
    }

    pub fn signature(&self, name: &str) -> Result<&Signature> {
        self.signatures.get(name).ok_or_else(|| anyhow!("no signature `{name}` in the catalog"))
    }

    pub fn algebra(&self, name: &str) -> Result<&FiniteAlgebra> {
        self.algebras.get(name).ok_or_else(|| anyhow!("no algebra `{name}` in the catalog"))
    }

    pub fn variety(&self, name: &str) -> Result<&Variety> {
        self.varieties.get(name).ok_or_else(|| anyhow!("no variety `{name}` in the catalog"))
    }

    pub fn ordered(&self, name: &str) -> Result<&OrderedAlgebra> {
        self.ordered.get(name).ok_or_else(|| anyhow!("no ordered algebra `{name}` in the catalog"))
    }

    /// Resolves an object reference for `category`: a size for chains, a
    /// catalog name, or `free:VARIETY:N` for a (neat-ordered) free algebra.
    pub fn object(&self, category: Category, reference: &str) -> Result<Object> {
        if let Some(rest) = reference.strip_prefix("free:") {
            let (variety, n) = rest
                .rsplit_once(':')
                .ok_or_else(|| anyhow!("expected free:VARIETY:N, got `{reference}`"))?;
            let n: usize = n.parse().with_context(|| format!("generator count in `{reference}`"))?;
            let v = self.variety(variety)?;
            return match category {
                Category::ChainsRs => bail!("chains are given by their size"),
                Category::OrderedAlgebrasRe => Ok(Object::Ordered(ordered_free(v, n)?.ordered)),
                Category::AlgebrasEpi => Ok(Object::Algebra(free_algebra(v, n)?.algebra)),
            };
        }
        match category {
            Category::ChainsRs => Ok(Object::Chain(
                reference.parse().with_context(|| format!("chain size `{reference}`"))?,
            )),
            Category::OrderedAlgebrasRe => Ok(Object::Ordered(self.ordered(reference)?.clone())),
            Category::AlgebrasEpi => match self.algebras.get(reference) {
                Some(a) => Ok(Object::Algebra(a.clone())),
                None => Ok(Object::Algebra(self.ordered(reference)?.algebra().clone())),
            },
        }
    }
}
