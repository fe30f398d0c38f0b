//! Gazetteer, abbreviation, and stopword files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use llg_core::{Gazetteer, TextResources};

/// English stopwords shipped with the binary.
pub const BUNDLED_STOPWORDS_EN: &str = include_str!("../resources/stopwords/en.txt");

fn stopword_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Resources with only the bundled English stopword list.
pub fn bundled_resources() -> TextResources {
    TextResources::new().with_stopwords("en", stopword_lines(BUNDLED_STOPWORDS_EN))
}

pub fn load_gazetteer(path: &Path) -> Result<Gazetteer> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let gazetteer: Gazetteer =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Err(msg) = gazetteer.validate() {
        bail!("{}: {msg}", path.display());
    }
    Ok(gazetteer)
}

pub fn load_abbreviations(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Adds the words of every `<lang>.txt` in `dir` to the list for that tag.
pub fn load_stopwords_dir(mut res: TextResources, dir: &Path) -> Result<TextResources> {
    let mut entries: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .collect::<std::io::Result<_>>()?;
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let Some(lang) = path.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        let text =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        res = res.with_stopwords(lang, stopword_lines(&text));
    }
    Ok(res)
}

/// Bundled stopwords, then an optional stopword directory and abbreviation map.
pub fn load_resources(
    stopwords: Option<&Path>,
    abbreviations: Option<&Path>,
) -> Result<TextResources> {
    let mut res = bundled_resources();
    if let Some(dir) = stopwords {
        res = load_stopwords_dir(res, dir)?;
    }
    if let Some(path) = abbreviations {
        for (short, long) in load_abbreviations(path)? {
            res = res.with_abbreviation(&short, &long);
        }
    }
    Ok(res)
}
