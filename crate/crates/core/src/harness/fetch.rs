use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Languages of the OPUS EMEA release.
pub const EMEA_LANGUAGES: [&str; 22] = [
    "bg", "cs", "da", "de", "el", "en", "es", "et", "fi", "fr", "hu", "it", "lt", "lv", "mt", "nl", "pl", "pt", "ro",
    "sk", "sl", "sv",
];

pub const EMEA_VERSION: &str = "v3";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchedCorpus {
    /// File of the first language of the requested pair.
    pub source: PathBuf,
    pub target: PathBuf,
    pub lines: usize,
    pub version: String,
    pub sha256: String,
}

/// Checks a `xx-yy` pair code and returns the two codes plus the archive
/// name OPUS uses (codes in alphabetical order).
pub fn parse_pair(pair: &str) -> Result<(String, String, String)> {
    let bad = || Error::InvalidArgument(format!("language pair must look like pl-en with EMEA languages, got {pair:?}"));
    let (a, b) = pair.split_once('-').ok_or_else(bad)?;
    if a == b || !EMEA_LANGUAGES.contains(&a) || !EMEA_LANGUAGES.contains(&b) {
        return Err(bad());
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    Ok((a.to_string(), b.to_string(), format!("{lo}-{hi}")))
}

pub fn emea_url(archive_pair: &str) -> String {
    format!("https://object.pouta.csc.fi/OPUS-EMEA/{EMEA_VERSION}/moses/{archive_pair}.txt.zip")
}

/// Downloads the Moses-format EMEA release for `pair` into `out_dir`,
/// checks that both sides have the same number of lines and writes a
/// `VERSION` file with the source URL and archive digest. With
/// `expected_sha256` set, a different archive digest is an error.
pub fn fetch_emea(out_dir: &Path, pair: &str, expected_sha256: Option<&str>) -> Result<FetchedCorpus> {
    let (a, b, archive_pair) = parse_pair(pair)?;
    download(out_dir, &a, &b, &archive_pair, expected_sha256)
}

#[cfg(feature = "fetch")]
fn download(out_dir: &Path, a: &str, b: &str, archive_pair: &str, expected: Option<&str>) -> Result<FetchedCorpus> {
    use std::io::{Read, Write};

    use sha2::{Digest, Sha256};

    let url = emea_url(archive_pair);
    log::info!("downloading {url}");
    let response = reqwest::blocking::get(&url).map_err(|e| Error::Network(e.to_string()))?;
    let status = response.status();
    if !status.is_success() {
        return Err(Error::Network(format!("{url}: HTTP {status}")));
    }
    let bytes = response.bytes().map_err(|e| Error::Network(e.to_string()))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    if let Some(exp) = expected {
        if !exp.eq_ignore_ascii_case(&sha256) {
            return Err(Error::Checksum {
                path: PathBuf::from(&url),
                expected: exp.to_string(),
                actual: sha256,
            });
        }
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut zip = zip::ZipArchive::new(std::io::Cursor::new(bytes.as_ref()))
        .map_err(|e| Error::Network(format!("{url}: not a zip archive: {e}")))?;
    let mut extract = |lang: &str| -> Result<PathBuf> {
        let name = format!("EMEA.{archive_pair}.{lang}");
        let mut entry = zip
            .by_name(&name)
            .map_err(|e| Error::Network(format!("{url}: missing {name}: {e}")))?;
        let mut content = Vec::new();
        entry.read_to_end(&mut content).map_err(|e| Error::io(Path::new(&name), e))?;
        let path = out_dir.join(&name);
        let mut f = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        f.write_all(&content).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    };
    let (source, target) = (extract(a)?, extract(b)?);
    let count = |p: &Path| -> Result<usize> {
        let bytes = std::fs::read(p).map_err(|e| Error::io(p, e))?;
        Ok(bytecount(&bytes))
    };
    let (ls, lt) = (count(&source)?, count(&target)?);
    if ls != lt {
        return Err(Error::LineCountMismatch {
            source_lines: ls,
            target_lines: lt,
        });
    }
    let version = format!("OPUS-EMEA {EMEA_VERSION}");
    let path = out_dir.join("VERSION");
    std::fs::write(&path, format!("{version}\nurl\t{url}\nsha256\t{sha256}\nlines\t{ls}\n"))
        .map_err(|e| Error::io(&path, e))?;
    Ok(FetchedCorpus {
        source,
        target,
        lines: ls,
        version,
        sha256,
    })
}

#[cfg(feature = "fetch")]
fn bytecount(bytes: &[u8]) -> usize {
    let newlines = bytes.iter().filter(|&&b| b == b'\n').count();
    newlines + usize::from(!bytes.is_empty() && bytes.last() != Some(&b'\n'))
}

#[cfg(not(feature = "fetch"))]
fn download(_: &Path, _: &str, _: &str, _: &str, _: Option<&str>) -> Result<FetchedCorpus> {
    Err(Error::Network("built without download support; enable the `fetch` feature".into()))
}
