use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use super::csv::fmt_g17;
use crate::models::{lookup, ModelEntry, ModelKind};

/// What a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// The second parameter point (`<driving>_tilde`).
    Param,
    /// The twist flux (φ, or φ_x on the honeycomb lattice).
    Flux,
    /// The system size (L, or L_x on the honeycomb lattice).
    Size,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::Param => "param",
            SweepAxis::Flux => "flux",
            SweepAxis::Size => "size",
        }
    }

    fn parse(s: &str) -> Result<Self, String> {
        match s {
            "param" => Ok(SweepAxis::Param),
            "flux" => Ok(SweepAxis::Flux),
            "size" => Ok(SweepAxis::Size),
            _ => Err(format!(
                "unknown sweep axis `{s}` (expected param, flux or size)"
            )),
        }
    }
}

/// One sweep: the swept axis takes `samples`; every other axis may hold a
/// list, in which case the sweep is repeated for each value (a series).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: String,
    /// Fixed couplings, including the driving parameter `param`.
    pub fixed_params: BTreeMap<String, f64>,
    pub param: f64,
    pub param_tilde: Vec<f64>,
    /// Chain length, or `L_x` on the honeycomb lattice.
    pub sizes: Vec<usize>,
    /// `L_y`; only for the honeycomb lattice.
    pub ly: Option<usize>,
    pub phis: Vec<f64>,
    pub phi_y: f64,
    pub axis: SweepAxis,
    pub samples: Vec<f64>,
    pub alpha_prime: bool,
    pub output_path: PathBuf,
}

impl SweepConfig {
    pub fn entry(&self) -> &'static ModelEntry {
        lookup(&self.model).expect("validated config has a registered model")
    }

    pub fn is_honeycomb(&self) -> bool {
        self.ly.is_some()
    }

    /// Canonical text form; parsing it gives back an equal config.
    pub fn to_config_text(&self) -> String {
        let entry = self.entry();
        let list = |v: &[f64]| v.iter().map(|x| fmt_g17(*x)).collect::<Vec<_>>().join(", ");
        let mut s = String::new();
        let _ = writeln!(s, "[model]\nname = {}", self.model);
        let _ = writeln!(s, "{} = {}", entry.driving, fmt_g17(self.param));
        for (k, v) in &self.fixed_params {
            if k != entry.driving {
                let _ = writeln!(s, "{k} = {}", fmt_g17(*v));
            }
        }
        if self.axis != SweepAxis::Param {
            let _ = writeln!(s, "{}_tilde = {}", entry.driving, list(&self.param_tilde));
        }
        let sizes = self
            .sizes
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(s, "\n[system]");
        if self.axis != SweepAxis::Size {
            match self.ly {
                Some(_) => {
                    let _ = writeln!(s, "lx = {sizes}");
                }
                None => {
                    let _ = writeln!(s, "L = {sizes}");
                }
            }
        }
        if let Some(ly) = self.ly {
            let _ = writeln!(s, "ly = {ly}\nphi_y = {}", fmt_g17(self.phi_y));
        }
        if self.axis != SweepAxis::Flux {
            let _ = writeln!(s, "phi = {}", list(&self.phis));
        }
        let _ = writeln!(s, "\n[sweep]\naxis = {}", self.axis.as_str());
        let _ = writeln!(s, "samples = {}", list(&self.samples));
        if self.alpha_prime {
            let _ = writeln!(s, "alpha_prime = true");
        }
        let _ = writeln!(s, "\n[output]\npath = {}", self.output_path.display());
        s
    }
}

/// Parse a real number that may be written as a multiple of π:
/// `0.952pi`, `-pi/3`, `2*pi/3`, `pi`, plus the aliases `pbc` (0) and `apbc` (π).
pub fn parse_real(text: &str) -> Result<f64, String> {
    let t = text.trim();
    match t.to_ascii_lowercase().as_str() {
        "pbc" => return Ok(0.0),
        "apbc" => return Ok(PI),
        _ => {}
    }
    let lower = t.to_ascii_lowercase();
    let bad = || format!("cannot read `{t}` as a number");
    let value = if let Some(pos) = lower.find("pi") {
        let (head, tail) = (&lower[..pos], &lower[pos + 2..]);
        let head = head.trim().trim_end_matches('*').trim();
        let coef = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        let tail = tail.trim();
        let den = if tail.is_empty() {
            1.0
        } else {
            tail.strip_prefix('/')
                .ok_or_else(bad)?
                .trim()
                .parse::<f64>()
                .map_err(|_| bad())?
        };
        coef * PI / den
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{t}` is not finite"))
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(parse_real).collect()
}

fn parse_sizes(text: &str, key: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&l| l > 0)
                .ok_or_else(|| format!("`{key}` must list positive integers, got `{}`", s.trim()))
        })
        .collect()
}

fn parse_bool(text: &str) -> Result<bool, String> {
    match text.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        t => Err(format!("expected true or false, got `{t}`")),
    }
}

/// Sample list from either `samples = a, b, ...` or `start`, `stop`, `count`.
fn resolve_samples(sec: &BTreeMap<String, String>) -> Result<Vec<f64>, String> {
    let ranged = ["start", "stop", "count"]
        .iter()
        .filter(|k| sec.contains_key(**k))
        .count();
    match (sec.get("samples"), ranged) {
        (Some(_), n) if n > 0 => {
            Err("give either `samples` or `start`/`stop`/`count`, not both".into())
        }
        (Some(list), _) => {
            if list.trim().is_empty() {
                Err("`samples` is empty".into())
            } else {
                parse_list(list)
            }
        }
        (None, 3) => {
            let start = parse_real(&sec["start"])?;
            let stop = parse_real(&sec["stop"])?;
            let count: usize = sec["count"]
                .trim()
                .parse()
                .map_err(|_| "`count` must be an integer".to_string())?;
            Ok(linspace(start, stop, count))
        }
        (None, 0) => Err("[sweep] needs `samples` or `start`/`stop`/`count`".into()),
        (None, _) => Err("`start`, `stop` and `count` must be given together".into()),
    }
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn split_sections(text: &str) -> Result<Sections, String> {
    let mut sections: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !matches!(name.as_str(), "model" | "system" | "sweep" | "output") {
                return Err(format!("line {}: unknown section [{name}]", n + 1));
            }
            if sections.contains_key(&name) {
                return Err(format!("line {}: section [{name}] appears twice", n + 1));
            }
            sections.insert(name.clone(), BTreeMap::new());
            current = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", n + 1))?;
        let sec = current
            .as_ref()
            .ok_or_else(|| format!("line {}: key outside of a section", n + 1))?;
        let key = key.trim().to_string();
        let map = sections.get_mut(sec).expect("section was inserted");
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(format!("line {}: `{key}` given twice", n + 1));
        }
    }
    Ok(sections)
}

fn take(sec: &mut BTreeMap<String, String>, key: &str) -> Option<String> {
    sec.remove(key)
}

fn reject_leftovers(name: &str, sec: &BTreeMap<String, String>) -> Result<(), String> {
    match sec.keys().next() {
        Some(k) => Err(format!("unknown key `{k}` in [{name}]")),
        None => Ok(()),
    }
}

/// Parse and validate a sweep config. `axis_hint` fills in a missing axis
/// and rejects a conflicting one.
pub fn parse_config(text: &str, axis_hint: Option<SweepAxis>) -> Result<SweepConfig, String> {
    let mut sections = split_sections(text)?;
    let mut model_sec = sections.remove("model").ok_or("missing [model] section")?;
    let mut system = sections.remove("system").unwrap_or_default();
    let mut sweep = sections.remove("sweep").ok_or("missing [sweep] section")?;
    let mut output = sections.remove("output").unwrap_or_default();

    let name = take(&mut model_sec, "name").ok_or("[model] needs `name`")?;
    let entry = lookup(&name).ok_or_else(|| format!("unknown model `{name}`"))?;
    let honeycomb = entry.kind == ModelKind::Band(crate::models::LatticeKind::Honeycomb);

    let axis = match (take(&mut sweep, "axis"), axis_hint) {
        (Some(a), hint) => {
            let a = SweepAxis::parse(a.trim())?;
            if hint.is_some_and(|h| h != a) {
                return Err(format!(
                    "this command sweeps {}, but the config asks for {}",
                    hint.unwrap().as_str(),
                    a.as_str()
                ));
            }
            a
        }
        (None, Some(h)) => h,
        (None, None) => return Err("[sweep] needs `axis`".into()),
    };

    let tilde_key = format!("{}_tilde", entry.driving);
    let param = match take(&mut model_sec, entry.driving) {
        Some(v) => parse_real(&v)?,
        None => entry.param(entry.driving).map(|p| p.default).unwrap_or(0.0),
    };
    let tilde_text = take(&mut model_sec, &tilde_key);
    let mut fixed_params = BTreeMap::new();
    for (k, v) in std::mem::take(&mut model_sec) {
        if entry.param(&k).is_none() {
            return Err(format!("model `{name}` has no parameter `{k}`"));
        }
        fixed_params.insert(k, parse_real(&v)?);
    }
    for p in entry.params {
        fixed_params.entry(p.name.to_string()).or_insert(p.default);
    }
    fixed_params.insert(entry.driving.to_string(), param);

    let samples = resolve_samples(&sweep)?;
    for k in ["samples", "start", "stop", "count"] {
        sweep.remove(k);
    }
    if samples.is_empty() {
        return Err("sweep has no samples".into());
    }
    let alpha_prime = match take(&mut sweep, "alpha_prime") {
        Some(v) => parse_bool(&v)?,
        None => false,
    };
    reject_leftovers("sweep", &sweep)?;
    if alpha_prime && !entry.supports_alpha_prime {
        return Err(format!("model `{name}` does not support alpha_prime"));
    }

    let param_tilde = match (axis, tilde_text) {
        (SweepAxis::Param, Some(_)) => {
            return Err(format!(
                "`{tilde_key}` is the swept axis; drop it from [model]"
            ))
        }
        (SweepAxis::Param, None) => samples.clone(),
        (_, Some(t)) => parse_list(&t)?,
        (_, None) => return Err(format!("[model] needs `{tilde_key}`")),
    };

    let size_key = if honeycomb { "lx" } else { "L" };
    let other_size_key = if honeycomb { "L" } else { "lx" };
    if system.contains_key(other_size_key) {
        return Err(format!(
            "use `{size_key}` rather than `{other_size_key}` for model `{name}`"
        ));
    }
    let sizes = match (axis, take(&mut system, size_key)) {
        (SweepAxis::Size, Some(_)) => {
            return Err(format!(
                "`{size_key}` is the swept axis; drop it from [system]"
            ))
        }
        (SweepAxis::Size, None) => {
            let mut out = Vec::with_capacity(samples.len());
            for &s in &samples {
                if s.fract() != 0.0 || s < 1.0 {
                    return Err(format!("size samples must be positive integers, got {s}"));
                }
                out.push(s as usize);
            }
            out
        }
        (_, Some(v)) => parse_sizes(&v, size_key)?,
        (_, None) => return Err(format!("[system] needs `{size_key}`")),
    };
    let ly = if honeycomb {
        let v = take(&mut system, "ly").ok_or("[system] needs `ly` for the honeycomb lattice")?;
        let l = parse_sizes(&v, "ly")?;
        if l.len() != 1 {
            return Err("`ly` takes a single value".into());
        }
        Some(l[0])
    } else {
        None
    };
    let phi_y = match take(&mut system, "phi_y") {
        Some(v) if honeycomb => parse_real(&v)?,
        Some(_) => {
            return Err(format!(
                "`phi_y` only applies to the honeycomb lattice, not `{name}`"
            ))
        }
        None => 0.0,
    };
    let phis = match (axis, take(&mut system, "phi")) {
        (SweepAxis::Flux, Some(_)) => {
            return Err("`phi` is the swept axis; drop it from [system]".into())
        }
        (SweepAxis::Flux, None) => samples.clone(),
        (_, Some(v)) => parse_list(&v)?,
        (_, None) => vec![0.0],
    };
    reject_leftovers("system", &system)?;

    let output_path = PathBuf::from(take(&mut output, "path").ok_or("[output] needs `path`")?);
    reject_leftovers("output", &output)?;

    if param_tilde.is_empty() || phis.is_empty() || sizes.is_empty() {
        return Err("every axis needs at least one value".into());
    }
    if entry.kind == ModelKind::Interacting && sizes.iter().any(|&l| l > crate::ed::MAX_SITES / 2) {
        return Err(format!(
            "ssh-interacting supports at most {} cells",
            crate::ed::MAX_SITES / 2
        ));
    }

    Ok(SweepConfig {
        model: entry.name.to_string(),
        fixed_params,
        param,
        param_tilde,
        sizes,
        ly,
        phis,
        phi_y,
        axis,
        samples,
        alpha_prime,
        output_path,
    })
}
