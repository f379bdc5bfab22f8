//! Run configuration: a flat map of typed keys, read from `key = value` files and
//! command-line flags. Every key a command accepts is filled in with its default,
//! so a stored config is the complete input of a run.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rwinv::group::GroupDescriptor;
use rwinv::WeightMode;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ExactLamplighter,
    Free,
    Drift,
    Cover,
    Invariance,
    Report,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::ExactLamplighter,
        Command::Free,
        Command::Drift,
        Command::Cover,
        Command::Invariance,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::ExactLamplighter => "exact-lamplighter",
            Command::Free => "free",
            Command::Drift => "drift",
            Command::Cover => "cover",
            Command::Invariance => "invariance",
            Command::Report => "report",
        }
    }

    /// Keys the command accepts, with defaults. Keys without a default are optional.
    fn keys(self) -> &'static [(&'static str, Option<&'static str>)] {
        match self {
            Command::ExactLamplighter => &[
                ("lamp-order", Some("2")),
                ("n", Some("10")),
                ("mode", Some("rational")),
                ("increments", Some("(0)[0:#1]")),
                ("entropy", Some("true")),
                ("tv-shift", Some("false")),
                ("check-invariance", Some("false")),
                ("gate", Some("literal")),
                ("radius-profile", Some("false")),
                ("constancy-profile", Some("false")),
                ("epsilon", Some("0.1")),
                ("samples", Some("4096")),
                ("seed", Some("0")),
                ("rational-cap", Some("400")),
                ("float-cap", Some("5000")),
                ("csv", None),
                ("json", None),
            ],
            Command::Free => &[
                ("rank", Some("2")),
                ("n", Some("100")),
                ("mode", Some("float")),
                ("word", Some("1,2,1")),
                ("ratio", Some("true")),
                ("csv", None),
                ("json", None),
            ],
            Command::Drift => &[
                ("group", Some("lamplighter:2")),
                ("n", Some("256,1024,4096")),
                ("samples", Some("1000")),
                ("seed", Some("0")),
                ("csv", None),
                ("json", None),
            ],
            Command::Cover => &[
                ("n", Some("10000")),
                ("samples", Some("200")),
                ("seed", Some("0")),
                ("lamp-order", Some("2")),
                ("increments", Some("")),
                ("csv", None),
                ("json", None),
            ],
            Command::Invariance => &[
                ("group", Some("zwrz")),
                ("n", Some("16384")),
                ("samples", Some("2000")),
                ("seed", Some("0")),
                ("increments", Some("")),
                ("a", Some("0.4")),
                ("c-n", None),
                ("epsilon", Some("0.1")),
                ("k", Some("1")),
                ("csv", None),
                ("json", None),
            ],
            Command::Report => &[("csv", None), ("json", None)],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command `{s}`")))
    }
}

/// Groups addressable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSpec {
    /// `z:d`
    Lattice(usize),
    /// `lamplighter:q`, `Z ≀ Z/q`
    Lamplighter(usize),
    /// `z2f:q`, `Z² ≀ Z/q`
    LamplighterZ2(usize),
    /// `iterated:j`; `zwrz` is `iterated:1`
    Iterated(usize),
    /// `free:m`
    Free(usize),
    /// `inner:j`, the inner value at the base point chain of `iterated:j`
    Inner(usize),
}

impl GroupSpec {
    pub fn descriptor(self) -> GroupDescriptor {
        match self {
            GroupSpec::Lattice(d) => GroupDescriptor::zd(d),
            GroupSpec::Lamplighter(q) => GroupDescriptor::lamplighter(q),
            GroupSpec::LamplighterZ2(q) => GroupDescriptor::lamplighter_z2(q),
            GroupSpec::Iterated(j) | GroupSpec::Inner(j) => GroupDescriptor::iterated_wreath_z(j),
            GroupSpec::Free(m) => GroupDescriptor::free(m),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Lattice(d) => write!(f, "z:{d}"),
            GroupSpec::Lamplighter(q) => write!(f, "lamplighter:{q}"),
            GroupSpec::LamplighterZ2(q) => write!(f, "z2f:{q}"),
            GroupSpec::Iterated(1) => write!(f, "zwrz"),
            GroupSpec::Iterated(j) => write!(f, "iterated:{j}"),
            GroupSpec::Free(m) => write!(f, "free:{m}"),
            GroupSpec::Inner(j) => write!(f, "inner:{j}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("unknown group `{s}` (try z:1, lamplighter:2, z2f:2, zwrz, iterated:2, free:2, inner:1)"));
        if s == "zwrz" {
            return Ok(GroupSpec::Iterated(1));
        }
        let (name, k) = s.split_once(':').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let spec = match name {
            "z" if k >= 1 => GroupSpec::Lattice(k),
            "lamplighter" if k >= 2 => GroupSpec::Lamplighter(k),
            "z2f" if k >= 2 => GroupSpec::LamplighterZ2(k),
            "iterated" if k >= 1 => GroupSpec::Iterated(k),
            "free" if k >= 2 => GroupSpec::Free(k),
            "inner" if (1..=2).contains(&k) => GroupSpec::Inner(k),
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

fn usage(key: &str, value: &str, what: &str) -> CliError {
    CliError::Usage(format!("`{key} = {value}`: expected {what}"))
}

/// Parses `value` for `key` and returns its canonical spelling.
fn normalize(key: &str, value: &str) -> Result<String, CliError> {
    let v = value.trim();
    let list = |sep: char| v.split(sep).map(str::trim).filter(|x| !x.is_empty());
    match key {
        "n" => {
            let grid: Vec<usize> = list(',')
                .map(|x| x.parse().map_err(|_| usage(key, v, "a comma-separated list of step counts")))
                .collect::<Result<_, _>>()?;
            if grid.is_empty() {
                return Err(usage(key, v, "at least one step count"));
            }
            Ok(grid.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        }
        "lamp-order" | "rank" | "samples" | "rational-cap" | "float-cap" => v
            .parse::<usize>()
            .map(|x| x.to_string())
            .map_err(|_| usage(key, v, "a nonnegative integer")),
        "seed" => v.parse::<u64>().map(|x| x.to_string()).map_err(|_| usage(key, v, "a 64-bit seed")),
        "epsilon" | "a" | "c-n" | "k" => match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x.to_string()),
            _ => Err(usage(key, v, "a finite number")),
        },
        "entropy" | "tv-shift" | "check-invariance" | "radius-profile" | "constancy-profile" | "ratio" => match v {
            "true" | "yes" | "1" | "" => Ok("true".into()),
            "false" | "no" | "0" => Ok("false".into()),
            _ => Err(usage(key, v, "true or false")),
        },
        "mode" => WeightMode::from_str(v)
            .map(|m| m.as_str().to_string())
            .map_err(|_| usage(key, v, "rational or float")),
        "gate" => match v {
            "literal" | "interior" => Ok(v.to_string()),
            _ => Err(usage(key, v, "literal or interior")),
        },
        "increments" => Ok(list(';').collect::<Vec<_>>().join(";")),
        "word" => {
            let letters: Vec<i32> = list(',')
                .map(|x| match x.parse::<i32>() {
                    Ok(l) if l != 0 => Ok(l),
                    _ => Err(usage(key, v, "comma-separated nonzero generator indices")),
                })
                .collect::<Result<_, _>>()?;
            Ok(letters.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        }
        "group" => GroupSpec::from_str(v).map(|g| g.to_string()),
        "csv" | "json" => Ok(v.to_string()),
        _ => Err(CliError::Usage(format!("unknown key `{key}`"))),
    }
}

/// Complete input of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let values = command
            .keys()
            .iter()
            .filter_map(|(k, d)| d.map(|d| (k.to_string(), d.to_string())))
            .collect();
        RunConfig { command, values }
    }

    /// Sets `key`; keys the command does not accept are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !self.command.keys().iter().any(|(k, _)| *k == key) {
            return Err(CliError::Usage(format!("unknown key `{key}` for `{}`", self.command)));
        }
        let v = normalize(key, value)?;
        self.values.insert(key.to_string(), v);
        Ok(())
    }

    /// Applies a `key = value` file. Blank lines and `#` comments are skipped; a
    /// `command` line must name this command.
    pub fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        for (k, v) in parse_lines(text)? {
            if k == "command" {
                if v != self.command.name() {
                    return Err(CliError::Usage(format!("config is for `{v}`, not `{}`", self.command)));
                }
                continue;
            }
            self.set(&k, &v)?;
        }
        Ok(())
    }

    /// Reads a config written by [`RunConfig::to_kv`].
    pub fn from_kv(text: &str) -> Result<Self, CliError> {
        let lines = parse_lines(text)?;
        let command = lines
            .iter()
            .find(|(k, _)| k == "command")
            .ok_or_else(|| CliError::Usage("config has no `command` line".into()))?
            .1
            .parse()?;
        let mut cfg = RunConfig::new(command);
        cfg.apply_file(text)?;
        Ok(cfg)
    }

    pub fn to_kv(&self) -> String {
        let mut s = format!("command = {}\n", self.command);
        for (k, v) in &self.values {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    /// SHA-256 of the canonical `key = value` text, lowercase hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_kv().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }

    fn required(&self, key: &str) -> &str {
        // every consumer asks only for keys with defaults
        self.values.get(key).map(String::as_str).unwrap_or_else(|| panic!("missing default for `{key}`"))
    }

    pub fn grid(&self) -> Vec<usize> {
        self.required("n").split(',').map(|x| x.parse().unwrap()).collect()
    }

    pub fn usize(&self, key: &str) -> usize {
        self.required(key).parse().unwrap()
    }

    pub fn u64(&self, key: &str) -> u64 {
        self.required(key).parse().unwrap()
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.required(key).parse().unwrap()
    }

    pub fn opt_f64(&self, key: &str) -> Option<f64> {
        self.get(key).map(|v| v.parse().unwrap())
    }

    pub fn flag(&self, key: &str) -> bool {
        self.required(key) == "true"
    }

    pub fn mode(&self) -> WeightMode {
        self.required("mode").parse().unwrap()
    }

    pub fn group(&self) -> GroupSpec {
        self.required("group").parse().unwrap()
    }

    pub fn increments(&self) -> Vec<String> {
        self.get("increments").map(|v| v.split(';').map(String::from).collect()).unwrap_or_default()
    }

    pub fn word(&self) -> Vec<i32> {
        self.get("word").map(|v| v.split(',').map(|x| x.parse().unwrap()).collect()).unwrap_or_default()
    }
}

fn parse_lines(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for command in Command::ALL {
            let cfg = RunConfig::new(command);
            assert_eq!(RunConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);
        }
        let mut cfg = RunConfig::new(Command::ExactLamplighter);
        cfg.set("n", " 100, 400 ,1600").unwrap();
        cfg.set("increments", "(0)[1:#1]; (0)[-1:#1,2:#1]").unwrap();
        cfg.set("epsilon", "0.10").unwrap();
        cfg.set("csv", "out.csv").unwrap();
        assert_eq!(cfg.get("n"), Some("100,400,1600"));
        assert_eq!(cfg.get("epsilon"), Some("0.1"));
        let back = RunConfig::from_kv(&cfg.to_kv()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        assert_eq!(back.increments().len(), 2);
    }

    #[test]
    fn unknown_and_misplaced_keys_are_errors() {
        let mut cfg = RunConfig::new(Command::Drift);
        assert!(cfg.set("colour", "blue").is_err());
        assert!(cfg.set("lamp-order", "2").is_err());
        assert!(cfg.set("n", "ten").is_err());
        assert!(cfg.apply_file("command = cover\n").is_err());
        assert!(cfg.apply_file("n 10\n").is_err());
        assert!(cfg.apply_file("# comment\n\ngroup = free:3\n").is_ok());
        assert_eq!(cfg.group(), GroupSpec::Free(3));
    }

    #[test]
    fn hash_tracks_values() {
        let a = RunConfig::new(Command::Cover);
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.set("seed", "1").unwrap();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn group_specs() {
        for s in ["z:1", "z:2", "lamplighter:2", "z2f:3", "zwrz", "iterated:2", "free:2", "inner:1"] {
            assert_eq!(s.parse::<GroupSpec>().unwrap().to_string(), s);
        }
        assert_eq!("iterated:1".parse::<GroupSpec>().unwrap().to_string(), "zwrz");
        for s in ["z", "lamplighter:1", "free:1", "inner:3", "q:2"] {
            assert!(s.parse::<GroupSpec>().is_err(), "{s}");
        }
    }
}
