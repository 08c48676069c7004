use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::dataset::FeatureTable;
use crate::error::{Error, Result};
use crate::imaging::{load_image, save_png, FeatureExtractor, ImageBuffer};

#[derive(Clone, Debug)]
pub enum ImageSource {
    Path(PathBuf),
    Memory(ImageBuffer),
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub source: ImageSource,
    pub label: usize,
    /// Path, or a display name for in-memory images.
    pub name: String,
}

impl CorpusEntry {
    pub fn image(&self) -> Result<ImageBuffer> {
        match &self.source {
            ImageSource::Path(p) => load_image(p),
            ImageSource::Memory(img) => Ok(img.clone()),
        }
    }

    /// SHA-256 of the encoded file bytes or of the raw raster.
    pub fn content_digest(&self) -> Result<[u8; 32]> {
        let mut h = Sha256::new();
        match &self.source {
            ImageSource::Path(p) => {
                h.update(std::fs::read(p).map_err(|e| Error::io(p, e))?);
            }
            ImageSource::Memory(img) => {
                h.update((img.width() as u64).to_le_bytes());
                h.update((img.height() as u64).to_le_bytes());
                h.update(img.pixels());
            }
        }
        Ok(h.finalize().into())
    }
}

#[derive(Clone, Debug)]
pub struct LabeledCorpus {
    pub entries: Vec<CorpusEntry>,
    pub class_names: Vec<String>,
    /// Files that could not be read as images while loading.
    pub skipped: usize,
}

const MIN_CLASSES: usize = 2;

/// One sub-directory per class; class indices follow sorted directory names.
pub fn load_corpus(root: &Path) -> Result<LabeledCorpus> {
    let mut class_dirs: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    class_dirs.sort();
    if class_dirs.len() < MIN_CLASSES {
        return Err(Error::TooFewClasses(class_dirs.len()));
    }

    let mut entries = Vec::new();
    let mut class_names = Vec::new();
    let mut skipped = 0;
    for (label, dir) in class_dirs.iter().enumerate() {
        class_names.push(
            dir.file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned(),
        );
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        let before = entries.len();
        for path in files {
            if is_readable_image(&path) {
                entries.push(CorpusEntry {
                    name: path.display().to_string(),
                    source: ImageSource::Path(path),
                    label,
                });
            } else {
                log::warn!("skipping unreadable file {}", path.display());
                skipped += 1;
            }
        }
        if entries.len() == before {
            return Err(Error::EmptyClass(dir.clone()));
        }
    }
    Ok(LabeledCorpus {
        entries,
        class_names,
        skipped,
    })
}

fn is_readable_image(path: &Path) -> bool {
    image::ImageReader::open(path)
        .and_then(|r| r.with_guessed_format())
        .map(|r| r.format().is_some() && r.into_dimensions().is_ok())
        .unwrap_or(false)
}

impl LabeledCorpus {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.label).collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes()];
        for e in &self.entries {
            counts[e.label] += 1;
        }
        counts
    }

    /// Hex digest over class names, entry names, labels and pixel content.
    pub fn content_hash(&self) -> Result<String> {
        let mut h = Sha256::new();
        for name in &self.class_names {
            h.update(name.as_bytes());
            h.update([0]);
        }
        for e in &self.entries {
            h.update((e.label as u64).to_le_bytes());
            h.update(e.content_digest()?);
        }
        Ok(hex(&h.finalize()))
    }

    /// Extract features for every entry, spreading work over the available
    /// cores. The output order matches `entries`.
    pub fn extract_features(&self, extractor: &FeatureExtractor) -> Result<FeatureTable> {
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        let chunk = self.entries.len().div_ceil(threads).max(1);
        let rows: Vec<Vec<f64>> = std::thread::scope(|s| {
            let handles: Vec<_> = self
                .entries
                .chunks(chunk)
                .map(|part| {
                    s.spawn(move || {
                        part.iter()
                            .map(|e| {
                                extractor
                                    .extract_image(&e.image()?)
                                    .map(|v| v.into_inner())
                                    .map_err(|err| match err {
                                        Error::InvalidImage(msg) => {
                                            Error::InvalidImage(format!("{}: {msg}", e.name))
                                        }
                                        other => other,
                                    })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("feature worker panicked"))
                .collect::<Result<Vec<_>>>()
        })?
        .into_iter()
        .flatten()
        .collect();
        FeatureTable::new(
            rows,
            self.labels(),
            self.class_names.clone(),
            self.entries.iter().map(|e| e.name.clone()).collect(),
        )
    }

    /// Write every image as PNG under `root/<class>/`.
    pub fn write_pngs(&self, root: &Path) -> Result<()> {
        for name in &self.class_names {
            let dir = root.join(name);
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        for (i, e) in self.entries.iter().enumerate() {
            let class = &self.class_names[e.label];
            let file = Path::new(&e.name)
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("{i:05}.png"));
            save_png(&e.image()?, &root.join(class).join(file))?;
        }
        Ok(())
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Features for `corpus`, read from or written to a cache file named by the
/// corpus content hash and the extractor configuration.
pub fn cached_features(
    corpus: &LabeledCorpus,
    extractor: &FeatureExtractor,
    cache_dir: Option<&Path>,
) -> Result<FeatureTable> {
    let Some(dir) = cache_dir else {
        return corpus.extract_features(extractor);
    };
    let mut h = Sha256::new();
    h.update(corpus.content_hash()?.as_bytes());
    h.update(serde_json::to_vec(extractor.config())?);
    let key = hex(&h.finalize());
    let path = dir.join(format!("features-{}.csv", &key[..16]));
    if path.exists() {
        log::info!("using cached features {}", path.display());
        let table = FeatureTable::read_csv(&path)?;
        if table.len() == corpus.len()
            && table.dim() == extractor.dim()
            && table
                .class_names
                .iter()
                .all(|n| corpus.class_names.contains(n))
        {
            return Ok(table.with_class_names(&corpus.class_names));
        }
        log::warn!(
            "cache {} does not match the corpus; re-extracting",
            path.display()
        );
    }
    let table = corpus.extract_features(extractor)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    table.write_csv(&path)?;
    Ok(table)
}
