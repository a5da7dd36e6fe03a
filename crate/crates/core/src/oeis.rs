//! Identify computed integer sequences against the OEIS.
//!
//! Offline mode consults only the bundled fixtures and a local response
//! cache, so tests run without a network. Online mode queries the JSON
//! search API and caches raw response bodies, keyed by the exact
//! comma-joined term string, with write-once files and atomic renames.
//!
//! Matching is strict prefix matching: a candidate matches when the
//! common prefix with the query covers the shorter of the two sequences
//! and reaches the configured minimum length.

use crate::number::Rat;
use num_bigint::BigInt;
use std::fs;
use std::path::PathBuf;
use thiserror::Error;

/// Fewest query terms accepted for a lookup.
pub const MIN_TERMS: usize = 6;
/// Default minimum matched-prefix length.
pub const DEFAULT_MIN_PREFIX: usize = 8;
/// Environment variable naming the cache directory.
pub const CACHE_ENV_VAR: &str = "QFACTOR_OEIS_CACHE";
/// Environment variable overriding the online endpoint.
pub const ENDPOINT_ENV_VAR: &str = "QFACTOR_OEIS_ENDPOINT";
/// Default online endpoint.
pub const DEFAULT_ENDPOINT: &str = "https://oeis.org/search";

const FIXTURES: &str = include_str!("oeis_fixtures.txt");

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("sequence lookup needs at least {MIN_TERMS} terms, got {got}")]
    TooFewTerms { got: usize },
    #[error("term {index} is {value}, which is not an integer; only integer sequences are looked up")]
    NonIntegerTerm { index: usize, value: String },
    #[error("network failure querying {url}: {detail}")]
    Network { url: String, detail: String },
    #[error("malformed search response: {detail}")]
    BadResponse { detail: String },
    #[error("cache I/O failure at {path}: {detail}")]
    Cache { path: String, detail: String },
}

/// One identified sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceMatch {
    pub oeis_id: String,
    pub name: String,
    pub matched_prefix_length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LookupMode {
    Offline,
    Online,
}

/// Lookup client; construct with [`OeisClient::offline`] or
/// [`OeisClient::online`] and chain the builder methods as needed.
#[derive(Clone, Debug)]
pub struct OeisClient {
    mode: LookupMode,
    cache_dir: Option<PathBuf>,
    min_prefix: usize,
    endpoint: String,
}

impl OeisClient {
    pub fn offline() -> Self {
        Self {
            mode: LookupMode::Offline,
            cache_dir: None,
            min_prefix: DEFAULT_MIN_PREFIX,
            endpoint: DEFAULT_ENDPOINT.into(),
        }
    }

    pub fn online() -> Self {
        Self {
            mode: LookupMode::Online,
            ..Self::offline()
        }
    }

    /// Cache directory from [`CACHE_ENV_VAR`], when set.
    pub fn cache_dir_from_env() -> Option<PathBuf> {
        std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from)
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn with_min_prefix(mut self, min_prefix: usize) -> Self {
        self.min_prefix = min_prefix;
        self
    }

    pub fn with_endpoint(mut self, endpoint: impl Into<String>) -> Self {
        self.endpoint = endpoint.into();
        self
    }

    /// Looks up an integer sequence; results are ordered by descending
    /// matched prefix length, ties broken by ID.
    pub fn lookup(&self, terms: &[BigInt]) -> Result<Vec<SequenceMatch>, OeisError> {
        if terms.len() < MIN_TERMS {
            return Err(OeisError::TooFewTerms { got: terms.len() });
        }
        let key = join_terms(terms);
        let mut matches = match_fixtures(&parse_fixtures(FIXTURES), terms, self.min_prefix);
        if let Some(body) = self.cached_response(&key)? {
            merge(&mut matches, parse_search_response(&body, terms, self.min_prefix)?);
        } else if self.mode == LookupMode::Online {
            let body = self.fetch(&key)?;
            self.store_response(&key, &body)?;
            merge(&mut matches, parse_search_response(&body, terms, self.min_prefix)?);
        }
        matches.sort_by(|a, b| {
            b.matched_prefix_length
                .cmp(&a.matched_prefix_length)
                .then_with(|| a.oeis_id.cmp(&b.oeis_id))
        });
        Ok(matches)
    }

    /// As [`lookup`](Self::lookup), but rejects any non-integer term
    /// instead of rounding it.
    pub fn lookup_rationals(&self, terms: &[Rat]) -> Result<Vec<SequenceMatch>, OeisError> {
        let ints = terms
            .iter()
            .enumerate()
            .map(|(index, t)| {
                if t.is_integer() {
                    Ok(t.to_integer())
                } else {
                    Err(OeisError::NonIntegerTerm {
                        index,
                        value: t.to_string(),
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.lookup(&ints)
    }

    fn cache_path(&self, key: &str) -> Option<PathBuf> {
        let dir = self.cache_dir.as_ref()?;
        // keep short keys readable; fall back to a hash for long ones
        let safe: String = key
            .chars()
            .map(|c| match c {
                ',' => '_',
                '-' => 'm',
                other => other,
            })
            .collect();
        let name = if safe.len() <= 180 {
            safe
        } else {
            format!("{:016x}", fnv64(key.as_bytes()))
        };
        Some(dir.join(format!("{name}.json")))
    }

    fn cached_response(&self, key: &str) -> Result<Option<String>, OeisError> {
        let Some(path) = self.cache_path(key) else {
            return Ok(None);
        };
        match fs::read_to_string(&path) {
            Ok(body) => Ok(Some(body)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(OeisError::Cache {
                path: path.display().to_string(),
                detail: e.to_string(),
            }),
        }
    }

    /// Write-once: an existing entry is left untouched; new entries are
    /// written to a temporary file and atomically renamed into place.
    fn store_response(&self, key: &str, body: &str) -> Result<(), OeisError> {
        let Some(path) = self.cache_path(key) else {
            return Ok(());
        };
        if path.exists() {
            return Ok(());
        }
        let io_err = |e: std::io::Error| OeisError::Cache {
            path: path.display().to_string(),
            detail: e.to_string(),
        };
        let dir = path.parent().expect("cache path has a parent");
        fs::create_dir_all(dir).map_err(io_err)?;
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        fs::write(&tmp, body).map_err(io_err)?;
        fs::rename(&tmp, &path).map_err(io_err)?;
        Ok(())
    }

    fn fetch(&self, key: &str) -> Result<String, OeisError> {
        let request = ureq::get(&self.endpoint)
            .query("q", key)
            .query("fmt", "json");
        let net_err = |detail: String| OeisError::Network {
            url: self.endpoint.clone(),
            detail,
        };
        let response = request.call().map_err(|e| net_err(e.to_string()))?;
        response.into_string().map_err(|e| net_err(e.to_string()))
    }
}

/// Longest common prefix of query and candidate when it covers the
/// shorter sequence and reaches `min_prefix`; `None` otherwise.
fn prefix_match(query: &[BigInt], candidate: &[BigInt], min_prefix: usize) -> Option<usize> {
    let bound = query.len().min(candidate.len());
    let common = query
        .iter()
        .zip(candidate)
        .take_while(|(a, b)| a == b)
        .count();
    (common == bound && common >= min_prefix).then_some(common)
}

struct Fixture {
    oeis_id: String,
    name: String,
    terms: Vec<BigInt>,
}

fn parse_fixtures(text: &str) -> Vec<Fixture> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let mut parts = line.splitn(3, '|');
            let oeis_id = parts.next().expect("fixture id").to_string();
            let name = parts.next().expect("fixture name").to_string();
            let terms = parts
                .next()
                .expect("fixture terms")
                .split(',')
                .map(|t| t.trim().parse().expect("fixture term is an integer"))
                .collect();
            Fixture {
                oeis_id,
                name,
                terms,
            }
        })
        .collect()
}

fn match_fixtures(fixtures: &[Fixture], terms: &[BigInt], min_prefix: usize) -> Vec<SequenceMatch> {
    fixtures
        .iter()
        .filter_map(|f| {
            prefix_match(terms, &f.terms, min_prefix).map(|len| SequenceMatch {
                oeis_id: f.oeis_id.clone(),
                name: f.name.clone(),
                matched_prefix_length: len,
            })
        })
        .collect()
}

/// Extracts matches from a search-API JSON body (`{"results": [{"number",
/// "name", "data"}, ...]}`); unparsable entries are skipped, a missing
/// results array means no matches.
fn parse_search_response(
    body: &str,
    terms: &[BigInt],
    min_prefix: usize,
) -> Result<Vec<SequenceMatch>, OeisError> {
    let value: serde_json::Value =
        serde_json::from_str(body).map_err(|e| OeisError::BadResponse {
            detail: e.to_string(),
        })?;
    let Some(results) = value.get("results").and_then(|r| r.as_array()) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for entry in results {
        let Some(number) = entry.get("number").and_then(|n| n.as_u64()) else {
            continue;
        };
        let name = entry
            .get("name")
            .and_then(|n| n.as_str())
            .unwrap_or_default()
            .to_string();
        let Some(data) = entry.get("data").and_then(|d| d.as_str()) else {
            continue;
        };
        let Ok(candidate) = data
            .split(',')
            .map(|t| t.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
        else {
            continue;
        };
        if let Some(len) = prefix_match(terms, &candidate, min_prefix) {
            out.push(SequenceMatch {
                oeis_id: format!("A{number:06}"),
                name,
                matched_prefix_length: len,
            });
        }
    }
    Ok(out)
}

/// Dedupe by ID, keeping the longer matched prefix.
fn merge(into: &mut Vec<SequenceMatch>, extra: Vec<SequenceMatch>) {
    for m in extra {
        match into.iter_mut().find(|x| x.oeis_id == m.oeis_id) {
            Some(existing) => {
                if m.matched_prefix_length > existing.matched_prefix_length {
                    *existing = m;
                }
            }
            None => into.push(m),
        }
    }
}

fn join_terms(terms: &[BigInt]) -> String {
    terms
        .iter()
        .map(BigInt::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn fnv64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
