//! Scenario files: a line-oriented `key = value` format with `[section]`
//! headers, parsed with position-annotated errors, canonicalized, and
//! content-hashed.
//!
//! The exact schema is documented in docs/formats.md.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use fdc_core::boxspace::NormalChain;
use fdc_core::game::{strategy_by_name, Strategy};
use fdc_core::group::{Elem, FiniteGroup, GroupModel, GroupSpace, LatticeGroup, Subgroup};

/// A scenario-level failure: configuration, parse, or validation.
#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError {
            message: message.into(),
        }
    }

    pub fn at(line: usize, message: impl fmt::Display) -> Self {
        ConfigError {
            message: format!("line {line}: {message}"),
        }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

/// One parsed `key = value` with its source line.
#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

/// A parsed scenario: sections of entries, in file order.
#[derive(Debug, Clone)]
pub struct Scenario {
    sections: BTreeMap<String, Vec<Entry>>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, Vec<Entry>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.split('#').next().unwrap_or("").trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(name) = trimmed.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return Err(ConfigError::at(line, "unterminated section header"));
                };
                let name = name.trim().to_ascii_lowercase();
                if name.is_empty() {
                    return Err(ConfigError::at(line, "empty section name"));
                }
                sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(ConfigError::at(line, "expected `key = value`"));
            };
            let Some(section) = &current else {
                return Err(ConfigError::at(line, "entry before any [section]"));
            };
            sections.get_mut(section).unwrap().push(Entry {
                key: key.trim().to_ascii_lowercase(),
                value: value.trim().to_string(),
                line,
            });
        }
        Ok(Scenario { sections })
    }

    /// Canonical dump: sections sorted, entries in file order, normalized
    /// whitespace. Two scenarios with the same canonical dump get the same
    /// digest.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (name, entries) in &self.sections {
            out.push_str(&format!("[{name}]\n"));
            for e in entries {
                out.push_str(&format!("{} = {}\n", e.key, e.value));
            }
        }
        out
    }

    /// Content hash of the canonical form.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical().as_bytes());
        {
        let mut hex = String::with_capacity(71);
        hex.push_str("sha256:");
        for byte in hasher.finalize() {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
    }

    fn one(&self, section: &str, key: &str) -> Result<Option<(&str, usize)>> {
        let Some(entries) = self.sections.get(section) else {
            return Ok(None);
        };
        let hits: Vec<&Entry> = entries.iter().filter(|e| e.key == key).collect();
        match hits.len() {
            0 => Ok(None),
            1 => Ok(Some((hits[0].value.as_str(), hits[0].line))),
            _ => Err(ConfigError::at(
                hits[1].line,
                format!("duplicate key `{key}` in [{section}]"),
            )),
        }
    }

    fn all(&self, section: &str, key: &str) -> Vec<(&str, usize)> {
        self.sections
            .get(section)
            .map(|entries| {
                entries
                    .iter()
                    .filter(|e| e.key == key)
                    .map(|e| (e.value.as_str(), e.line))
                    .collect()
            })
            .unwrap_or_default()
    }

    fn require(&self, section: &str, key: &str) -> Result<(&str, usize)> {
        self.one(section, key)?.ok_or_else(|| {
            ConfigError::new(format!("missing `{key}` in [{section}]"))
        })
    }

    pub fn get_str(&self, section: &str, key: &str) -> Result<Option<String>> {
        Ok(self.one(section, key)?.map(|(v, _)| v.to_string()))
    }

    fn parse_num<T: std::str::FromStr>(value: &str, line: usize, what: &str) -> Result<T> {
        value
            .trim()
            .parse()
            .map_err(|_| ConfigError::at(line, format!("{what}: cannot parse `{value}`")))
    }

    fn num<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<Option<T>> {
        match self.one(section, key)? {
            Some((v, line)) => Ok(Some(Self::parse_num(v, line, key)?)),
            None => Ok(None),
        }
    }

    fn num_required<T: std::str::FromStr>(&self, section: &str, key: &str) -> Result<T> {
        let (v, line) = self.require(section, key)?;
        Self::parse_num(v, line, key)
    }

    fn num_list<T: std::str::FromStr>(value: &str, line: usize, what: &str) -> Result<Vec<T>> {
        value
            .split(',')
            .map(|x| Self::parse_num(x, line, what))
            .collect()
    }

    /// Builds the group model from [group].
    pub fn build_model(&self) -> Result<GroupModel> {
        let (kind, kline) = self.require("group", "kind")?;
        match kind {
            "lattice" => {
                let rank: usize = self.num("group", "rank")?.unwrap_or(1);
                let window: u32 = self.num("group", "window")?.unwrap_or(256);
                let model = match self.one("group", "generators")? {
                    None => LatticeGroup::zn(rank, window),
                    Some((v, line)) => {
                        let gens: Vec<Vec<i64>> = v
                            .split(';')
                            .map(|g| Self::num_list(g, line, "generator"))
                            .collect::<Result<_>>()?;
                        LatticeGroup::new(&format!("Z^{rank}*"), rank, gens, window)
                            .map_err(|e| ConfigError::at(line, e))?
                    }
                };
                Ok(GroupModel::Lattice(Arc::new(model)))
            }
            "cyclic" => {
                let modulus: usize = self.num_required("group", "modulus")?;
                if modulus == 0 {
                    return Err(ConfigError::new("cyclic modulus must be positive"));
                }
                Ok(GroupModel::Finite(FiniteGroup::cyclic(modulus)))
            }
            "table" => {
                let (rows, line) = self.require("group", "table")?;
                let table: Vec<Vec<usize>> = rows
                    .split(';')
                    .map(|r| Self::num_list(r, line, "table row"))
                    .collect::<Result<_>>()?;
                let labels = match self.one("group", "labels")? {
                    Some((v, _)) => v.split(',').map(|s| s.trim().to_string()).collect(),
                    None => (0..table.len()).map(|i| i.to_string()).collect(),
                };
                let gens = match self.one("group", "generators")? {
                    Some((v, gline)) => Self::num_list(v, gline, "generator index")?,
                    None => (0..table.len()).collect(),
                };
                let g = FiniteGroup::from_table("table", labels, table, gens)
                    .map_err(|e| ConfigError::at(line, e))?;
                Ok(GroupModel::Finite(g))
            }
            "permutation" => {
                let degree: usize = self.num_required("group", "degree")?;
                let (perms, line) = self.require("group", "perms")?;
                let gens: Vec<Vec<usize>> = perms
                    .split(';')
                    .map(|p| Self::num_list(p, line, "permutation"))
                    .collect::<Result<_>>()?;
                let g = FiniteGroup::from_permutations("perm", degree, gens, 50_000)
                    .map_err(|e| ConfigError::at(line, e))?;
                Ok(GroupModel::Finite(g))
            }
            other => Err(ConfigError::at(
                kline,
                format!("unknown group kind `{other}`"),
            )),
        }
    }

    /// Builds the carrier region space from [region] (default: the whole
    /// group for finite models, the open 32-ball otherwise).
    pub fn build_ctx(&self, model: &GroupModel) -> Result<GroupSpace> {
        let kind = self
            .get_str("region", "kind")?
            .unwrap_or_else(|| match model {
                GroupModel::Finite(_) => "all".into(),
                GroupModel::Lattice(_) => "ball".into(),
            });
        let ctx = match kind.as_str() {
            "ball" => {
                let radius: u32 = self.num("region", "radius")?.unwrap_or(32);
                model.induced_space(radius)
            }
            "interval" => {
                let lo: i64 = self.num_required("region", "lo")?;
                let hi: i64 = self.num_required("region", "hi")?;
                if lo > hi {
                    return Err(ConfigError::new("region interval has lo > hi"));
                }
                let GroupModel::Lattice(g) = model else {
                    return Err(ConfigError::new("interval regions need a lattice group"));
                };
                if g.rank() != 1 {
                    return Err(ConfigError::new("interval regions need rank 1"));
                }
                model.space_over((lo..=hi).map(|v| Elem::Vector(vec![v])).collect())
            }
            "all" => {
                let GroupModel::Finite(g) = model else {
                    return Err(ConfigError::new("region `all` needs a finite group"));
                };
                model.space_over((0..g.order()).map(Elem::Idx).collect())
            }
            other => return Err(ConfigError::new(format!("unknown region kind `{other}`"))),
        };
        ctx.map_err(|e| ConfigError::new(format!("building the region: {e}")))
    }

    fn parse_subgroup(&self, model: &GroupModel, value: &str, line: usize, name: &str) -> Result<Subgroup> {
        match model {
            GroupModel::Lattice(_) => {
                let rows: Vec<Vec<i64>> = value
                    .split('|')
                    .map(|r| Self::num_list(r, line, "basis row"))
                    .collect::<Result<_>>()?;
                Subgroup::sublattice(model, rows, name).map_err(|e| ConfigError::at(line, e))
            }
            GroupModel::Finite(_) => {
                let members: Vec<usize> = Self::num_list(value, line, "member index")?;
                Subgroup::members(model, members, name).map_err(|e| ConfigError::at(line, e))
            }
        }
    }

    /// Builds the chain from the [chain] `sub` lines.
    pub fn build_chain(&self, model: &GroupModel) -> Result<NormalChain> {
        let subs = self.all("chain", "sub");
        if subs.is_empty() {
            return Err(ConfigError::new("missing [chain] with at least one `sub`"));
        }
        let subgroups = subs
            .iter()
            .enumerate()
            .map(|(i, (v, line))| self.parse_subgroup(model, v, *line, &format!("N{}", i + 1)))
            .collect::<Result<Vec<_>>>()?;
        NormalChain::new(model, subgroups).map_err(|e| ConfigError::new(format!("chain: {e}")))
    }

    /// The challenge gaps from [challenge].
    pub fn challenge_rounds(&self) -> Result<Vec<u32>> {
        let (v, line) = self.require("challenge", "rounds")?;
        Self::num_list(v, line, "round")
    }

    /// Builds the strategy from [strategy].
    pub fn build_strategy(&self, model: &GroupModel) -> Result<Box<dyn Strategy>> {
        let (name, _line) = self.require("strategy", "name")?;
        let axes = match self.one("strategy", "axes")? {
            Some((v, line)) => Some(Self::num_list(v, line, "axis")?),
            None => None,
        };
        let period: Option<u32> = self.num("strategy", "period")?;
        let level: Option<usize> = self.num("strategy", "level")?;
        let sub = match self.one("strategy", "sub")? {
            Some((v, line)) => Some(self.parse_subgroup(model, v, line, "strategy-subgroup")?),
            None => None,
        };
        strategy_by_name(name, axes, period, level, sub)
            .map_err(|e| ConfigError::new(format!("strategy: {e}")))
    }

    /// The bound B, overridable from the command line.
    pub fn bound(&self, override_bound: Option<u32>) -> Result<u32> {
        if let Some(b) = override_bound {
            return Ok(b);
        }
        self.num("run", "bound")?
            .ok_or_else(|| ConfigError::new("missing `bound` in [run] (or pass --bound)"))
    }

    pub fn run_num<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.num("run", key)
    }

    /// The rho_2 floor for profile-map: `a/b - c` means floor(a*t/b) - c,
    /// clamped at zero.
    pub fn map_floor(&self) -> Result<(u32, u32, u32)> {
        match self.one("map", "floor")? {
            None => Ok((1, 3, 1)),
            Some((v, line)) => {
                let err = || ConfigError::at(line, "floor must look like `1/3 - 1`");
                let (frac, shift) = v.split_once('-').map_or((v, "0"), |(a, b)| (a, b));
                let (num, den) = frac.split_once('/').ok_or_else(err)?;
                let num: u32 = num.trim().parse().map_err(|_| err())?;
                let den: u32 = den.trim().parse().map_err(|_| err())?;
                let shift: u32 = shift.trim().parse().map_err(|_| err())?;
                if den == 0 {
                    return Err(err());
                }
                Ok((num, den, shift))
            }
        }
    }

    /// The displacement bound C of [map] for profile-map.
    pub fn map_c(&self) -> Result<Option<u32>> {
        self.num("map", "c")
    }

    /// The alternate generating set of [map] for profile-map.
    pub fn map_other_generators(&self) -> Result<Vec<Vec<i64>>> {
        let (v, line) = self.require("map", "other-generators")?;
        v.split(';')
            .map(|g| Self::num_list(g, line, "generator"))
            .collect()
    }
}
