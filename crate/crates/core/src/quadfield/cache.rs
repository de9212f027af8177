//! Versioned plain-text cache of field invariants and λ-generators.
//!
//! ```text
//! # kolyv field cache v1
//! field 10 disc=40 unit=3:1 norm=-1 h=2
//! gen 10 3^2 7/1:2/1
//! ```
//!
//! Generator values are written as `a:b` meaning `a + b√d` with rational `a`, `b`.

use super::{QuadField, QuadNum};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

pub const HEADER: &str = "# kolyv field cache v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldRecord {
    pub disc: i64,
    pub unit: (BigRational, BigRational),
    pub norm: i64,
    pub h: u64,
}

#[derive(Debug, Default)]
pub struct FieldCache {
    path: Option<PathBuf>,
    fields: BTreeMap<i64, FieldRecord>,
    generators: BTreeMap<(i64, String), Option<(BigRational, BigRational)>>,
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("cache: bad rational {s:?}"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    Ok(BigRational::new(n, d))
}

fn parse_quad(s: &str) -> Result<(BigRational, BigRational)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument(format!("cache: bad number {s:?}")))?;
    Ok((parse_rat(a)?, parse_rat(b)?))
}

fn ideal_key(ideal: &[(u64, i64)]) -> String {
    ideal.iter().map(|(l, e)| format!("{l}^{e}")).collect::<Vec<_>>().join("*")
}

fn parse_ideal(s: &str) -> Result<Vec<(u64, i64)>> {
    s.split('*')
        .map(|part| {
            let (l, e) = part
                .split_once('^')
                .ok_or_else(|| Error::InvalidArgument(format!("cache: bad ideal {s:?}")))?;
            Ok((
                l.parse().map_err(|_| Error::InvalidArgument(format!("cache: bad prime {l:?}")))?,
                e.parse().map_err(|_| Error::InvalidArgument(format!("cache: bad exponent {e:?}")))?,
            ))
        })
        .collect()
}

impl FieldCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Load from `path`; a missing file gives an empty cache bound to `path`.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut cache = FieldCache { path: Some(path.clone()), ..Default::default() };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(Error::InvalidArgument(format!("cache: {e}"))),
        };
        cache.parse(&text)?;
        Ok(cache)
    }

    pub fn parse(&mut self, text: &str) -> Result<()> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == HEADER => {}
            Some(h) => return Err(Error::InvalidArgument(format!("cache: unsupported header {h:?}"))),
            None => return Ok(()),
        }
        for line in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let d: i64 = fields
                .get(1)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("cache: bad line {line:?}")))?;
            match fields[0] {
                "field" => {
                    let mut rec = FieldRecord { disc: 0, unit: (BigRational::from_integer(0.into()), BigRational::from_integer(0.into())), norm: 0, h: 0 };
                    for kv in &fields[2..] {
                        let (k, v) = kv
                            .split_once('=')
                            .ok_or_else(|| Error::InvalidArgument(format!("cache: bad entry {kv:?}")))?;
                        let num_err = || Error::InvalidArgument(format!("cache: bad value {v:?}"));
                        match k {
                            "disc" => rec.disc = v.parse().map_err(|_| num_err())?,
                            "unit" => rec.unit = parse_quad(v)?,
                            "norm" => rec.norm = v.parse().map_err(|_| num_err())?,
                            "h" => rec.h = v.parse().map_err(|_| num_err())?,
                            _ => {}
                        }
                    }
                    self.fields.insert(d, rec);
                }
                "gen" => {
                    let ideal = fields.get(2).ok_or_else(|| Error::InvalidArgument(format!("cache: bad line {line:?}")))?;
                    parse_ideal(ideal)?;
                    let value = match fields.get(3) {
                        Some(&"none") => None,
                        Some(v) => Some(parse_quad(v)?),
                        None => return Err(Error::InvalidArgument(format!("cache: bad line {line:?}"))),
                    };
                    self.generators.insert((d, ideal.to_string()), value);
                }
                other => return Err(Error::InvalidArgument(format!("cache: unknown record {other:?}"))),
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::from(HEADER);
        out.push('\n');
        for (d, r) in &self.fields {
            out.push_str(&format!("field {d} disc={} unit={}:{} norm={} h={}\n", r.disc, r.unit.0, r.unit.1, r.norm, r.h));
        }
        for ((d, ideal), v) in &self.generators {
            match v {
                Some((a, b)) => out.push_str(&format!("gen {d} {ideal} {a}:{b}\n")),
                None => out.push_str(&format!("gen {d} {ideal} none\n")),
            }
        }
        out
    }

    pub fn save(&self) -> Result<()> {
        if let Some(p) = &self.path {
            fs::write(p, self.render()).map_err(|e| Error::InvalidArgument(format!("cache: {e}")))?;
        }
        Ok(())
    }

    pub fn field(&self, d: i64) -> Option<&FieldRecord> {
        self.fields.get(&d)
    }

    /// Check a computed field against its record, or record it.
    pub fn sync_field(&mut self, f: &QuadField) -> Result<()> {
        let u = f.fundamental_unit();
        let rec = FieldRecord { disc: f.disc(), unit: (u.a().clone(), u.b().clone()), norm: f.unit_norm(), h: f.class_number() };
        match self.fields.get(&f.d()) {
            Some(old) if *old != rec => Err(Error::InvalidArgument(format!("cache: stale field record for d = {}", f.d()))),
            Some(_) => Ok(()),
            None => {
                self.fields.insert(f.d(), rec);
                Ok(())
            }
        }
    }

    /// Preload cached generators into the field memo, then record any new ones.
    pub fn sync_generators(&mut self, f: &QuadField) {
        for ((d, ideal), v) in &self.generators {
            if *d == f.d() {
                if let Ok(key) = parse_ideal(ideal) {
                    let g = v.as_ref().map(|(a, b)| QuadNum::new(f.d(), a.clone(), b.clone()));
                    f.preload_generator(key, g);
                }
            }
        }
        for (key, g) in f.known_generators() {
            let v = g.map(|g| (g.a().clone(), g.b().clone()));
            self.generators.insert((f.d(), ideal_key(&key)), v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::make_field;
    use super::*;

    #[test]
    fn round_trip() {
        let f = make_field(10).unwrap();
        f.lambda_generator(3).unwrap();
        let mut c = FieldCache::in_memory();
        c.sync_field(&f).unwrap();
        c.sync_generators(&f);
        let text = c.render();
        assert!(text.starts_with(HEADER));
        let mut back = FieldCache::in_memory();
        back.parse(&text).unwrap();
        assert_eq!(back.render(), text);
        assert_eq!(back.field(10).unwrap().h, 2);
    }

    #[test]
    fn rejects_unknown_version() {
        let mut c = FieldCache::in_memory();
        assert!(c.parse("# kolyv field cache v0\n").is_err());
    }
}
