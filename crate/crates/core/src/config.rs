//! Run and sweep configuration: flat `key = value` text with dotted section
//! prefixes. Lines starting with `#` and blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evolve::Coupling;
use crate::exponents::{classify_regime, PhysParams, Regime, Sign};
use crate::field::RadialGrid;

/// Which parameter region a run must lie in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scope {
    #[default]
    Any,
    /// `N = 2`, `0 < b < 1`, `α > 2 - b`.
    TwoD,
    /// The higher-dimensional region of the radial scattering result.
    Appendix,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Any => "any",
            Scope::TwoD => "2d",
            Scope::Appendix => "appendix",
        }
    }
}

impl FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(Scope::Any),
            "2d" => Ok(Scope::TwoD),
            "appendix" => Ok(Scope::Appendix),
            other => Err(Error::Config(format!("unknown scope '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialKind {
    /// `amplitude · exp(-r²/(2 width²))`.
    Gaussian,
    /// `multiple · Q`.
    GroundStateMultiple,
    /// A field snapshot on the run grid.
    File,
}

impl InitialKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InitialKind::Gaussian => "gaussian",
            InitialKind::GroundStateMultiple => "ground_state_multiple",
            InitialKind::File => "file",
        }
    }
}

impl FromStr for InitialKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(InitialKind::Gaussian),
            "ground_state_multiple" => Ok(InitialKind::GroundStateMultiple),
            "file" => Ok(InitialKind::File),
            other => Err(Error::Config(format!("unknown initial.kind '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: u32,
    pub b: f64,
    pub alpha: f64,
    pub sign: Sign,
    pub scope: Scope,
    pub coupling: Coupling,
    pub r_max: f64,
    pub points: usize,
    /// `None` means `h/4`.
    pub dt: Option<f64>,
    pub t_final: f64,
    pub record_every: usize,
    pub blowup_factor: f64,
    pub initial: InitialKind,
    pub amplitude: f64,
    pub width: f64,
    pub multiple: f64,
    pub path: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Ratio of the snapshot ladder `1, base, base², …`.
    pub snapshot_base: f64,
    pub virial_r: f64,
    pub cutoff_r: Vec<f64>,
    pub scattering_tol: f64,
    /// `None` means the run horizon.
    pub morawetz_horizon: Option<f64>,
    pub gs_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            b: 0.5,
            alpha: 2.0,
            sign: Sign::Defocusing,
            scope: Scope::Any,
            coupling: Coupling::Physical,
            r_max: 40.0,
            points: 1024,
            dt: None,
            t_final: 1.0,
            record_every: 10,
            blowup_factor: 100.0,
            initial: InitialKind::Gaussian,
            amplitude: 1.0,
            width: 1.0,
            multiple: 1.0,
            path: None,
            output_dir: PathBuf::from("inls-out"),
            snapshot_base: 2.0,
            virial_r: 10.0,
            cutoff_r: vec![5.0, 10.0, 20.0],
            scattering_tol: 0.05,
            morawetz_horizon: None,
            gs_tol: 1e-12,
        }
    }
}

const REQUIRED: [&str; 7] = [
    "physics.N",
    "physics.b",
    "physics.alpha",
    "physics.sign",
    "grid.r_max",
    "grid.points",
    "time.t_final",
];

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{value}'")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    let items: Vec<f64> = value
        .split(',')
        .map(|v| parse_num::<f64>(key, v.trim()))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Config(format!("{key}: empty list")));
    }
    Ok(items)
}

fn fmt_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Splits text into `key → value`, rejecting malformed and repeated keys.
fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut pairs = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if pairs.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!("duplicate key '{key}'")));
        }
    }
    Ok(pairs)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(parse_pairs(text)?)
    }

    fn from_pairs(pairs: BTreeMap<String, String>) -> Result<Self> {
        for key in REQUIRED {
            if !pairs.contains_key(key) {
                return Err(Error::Config(format!("missing required key '{key}'")));
            }
        }
        let mut c = RunConfig::default();
        for (key, value) in &pairs {
            let v = value.as_str();
            match key.as_str() {
                "physics.N" => c.n = parse_num(key, v)?,
                "physics.b" => c.b = parse_num(key, v)?,
                "physics.alpha" => c.alpha = parse_num(key, v)?,
                "physics.sign" => {
                    c.sign = v
                        .parse()
                        .map_err(|_| Error::Config(format!("{key}: '{v}'")))?
                }
                "physics.scope" => c.scope = v.parse()?,
                "physics.coupling" => {
                    c.coupling = v
                        .parse()
                        .map_err(|_| Error::Config(format!("{key}: '{v}'")))?
                }
                "grid.r_max" => c.r_max = parse_num(key, v)?,
                "grid.points" => c.points = parse_num(key, v)?,
                "time.dt" => c.dt = Some(parse_num(key, v)?),
                "time.t_final" => c.t_final = parse_num(key, v)?,
                "time.record_every" => c.record_every = parse_num(key, v)?,
                "time.blowup_factor" => c.blowup_factor = parse_num(key, v)?,
                "initial.kind" => c.initial = v.parse()?,
                "initial.amplitude" => c.amplitude = parse_num(key, v)?,
                "initial.width" => c.width = parse_num(key, v)?,
                "initial.multiple" => c.multiple = parse_num(key, v)?,
                "initial.path" => c.path = Some(PathBuf::from(v)),
                "output.directory" => c.output_dir = PathBuf::from(v),
                "output.snapshot_base" => c.snapshot_base = parse_num(key, v)?,
                "diagnostics.virial_R" => c.virial_r = parse_num(key, v)?,
                "diagnostics.cutoff_R" => c.cutoff_r = parse_list(key, v)?,
                "diagnostics.scattering_tol" => c.scattering_tol = parse_num(key, v)?,
                "diagnostics.morawetz_horizon" => c.morawetz_horizon = Some(parse_num(key, v)?),
                "groundstate.tol" => c.gs_tol = parse_num(key, v)?,
                other => return Err(Error::Config(format!("unknown key '{other}'"))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::new(self.n, self.b, self.alpha, self.sign)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.n, self.points, self.r_max).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn time_step(&self) -> f64 {
        self.dt.unwrap_or(self.r_max / self.points as f64 / 4.0)
    }

    pub fn validate(&self) -> Result<()> {
        let params = self.params()?;
        let grid = self.grid()?;
        match self.scope {
            Scope::Any => {}
            Scope::TwoD => {
                if self.n != 2 {
                    return Err(Error::Config(format!(
                        "2d scope needs N = 2, got N = {}",
                        self.n
                    )));
                }
                if !(self.b < 1.0) {
                    return Err(Error::Config(format!(
                        "b out of range: 2d scope needs 0 < b < 1, got b = {}",
                        self.b
                    )));
                }
                if !(self.alpha > 2.0 - self.b) {
                    return Err(Error::Config(format!(
                        "alpha out of range: 2d scope needs alpha > 2 - b = {}, got {}",
                        2.0 - self.b,
                        self.alpha
                    )));
                }
            }
            Scope::Appendix => {
                let regime = classify_regime(&params).map_err(|e| Error::Config(e.to_string()))?;
                if regime != Regime::ScatteringScopeAppendix {
                    return Err(Error::Config(format!(
                        "parameters are outside the appendix scope (regime {})",
                        regime.as_str()
                    )));
                }
            }
        }
        let dt = self.time_step();
        if !(dt > 0.0 && dt < grid.h) {
            return Err(Error::Config(format!(
                "time.dt = {dt} must lie in (0, h = {})",
                grid.h
            )));
        }
        if !(self.t_final > 0.0) {
            return Err(Error::Config(format!(
                "time.t_final must be positive, got {}",
                self.t_final
            )));
        }
        if self.record_every == 0 {
            return Err(Error::Config("time.record_every must be at least 1".into()));
        }
        if !(self.blowup_factor > 1.0) {
            return Err(Error::Config("time.blowup_factor must exceed 1".into()));
        }
        if !(self.snapshot_base > 1.0) {
            return Err(Error::Config("output.snapshot_base must exceed 1".into()));
        }
        if !(self.width > 0.0) {
            return Err(Error::Config("initial.width must be positive".into()));
        }
        if self.initial == InitialKind::File && self.path.is_none() {
            return Err(Error::Config(
                "initial.kind = file needs initial.path".into(),
            ));
        }
        if !(self.scattering_tol > 0.0) {
            return Err(Error::Config(
                "diagnostics.scattering_tol must be positive".into(),
            ));
        }
        if !(self.virial_r > 0.0) || self.cutoff_r.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::Config(
                "virial and cutoff radii must be positive".into(),
            ));
        }
        if !(self.gs_tol > 0.0) {
            return Err(Error::Config("groundstate.tol must be positive".into()));
        }
        Ok(())
    }

    /// Snapshot times `0, 1, base, base², …` below `t_final`, then `t_final`.
    pub fn snapshot_times(&self) -> Vec<f64> {
        let mut times = vec![0.0];
        let mut t = 1.0;
        while t < self.t_final {
            times.push(t);
            t *= self.snapshot_base;
        }
        times.push(self.t_final);
        times
    }

    /// Canonical text form; `parse(emit(c)) == c`.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        self.emit_into(&mut s);
        s
    }

    fn emit_into(&self, s: &mut String) {
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("physics.N", self.n.to_string());
        kv("physics.b", self.b.to_string());
        kv("physics.alpha", self.alpha.to_string());
        kv("physics.sign", self.sign.as_str().into());
        kv("physics.scope", self.scope.as_str().into());
        kv("physics.coupling", self.coupling.as_str().into());
        kv("grid.r_max", self.r_max.to_string());
        kv("grid.points", self.points.to_string());
        if let Some(dt) = self.dt {
            kv("time.dt", dt.to_string());
        }
        kv("time.t_final", self.t_final.to_string());
        kv("time.record_every", self.record_every.to_string());
        kv("time.blowup_factor", self.blowup_factor.to_string());
        kv("initial.kind", self.initial.as_str().into());
        kv("initial.amplitude", self.amplitude.to_string());
        kv("initial.width", self.width.to_string());
        kv("initial.multiple", self.multiple.to_string());
        if let Some(p) = &self.path {
            kv("initial.path", p.display().to_string());
        }
        kv("output.directory", self.output_dir.display().to_string());
        kv("output.snapshot_base", self.snapshot_base.to_string());
        kv("diagnostics.virial_R", self.virial_r.to_string());
        kv("diagnostics.cutoff_R", fmt_list(&self.cutoff_r));
        kv(
            "diagnostics.scattering_tol",
            self.scattering_tol.to_string(),
        );
        if let Some(h) = self.morawetz_horizon {
            kv("diagnostics.morawetz_horizon", h.to_string());
        }
        kv("groundstate.tol", self.gs_tol.to_string());
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub b: Vec<f64>,
    pub alpha: Vec<f64>,
    /// Applied to `initial.multiple` for ground-state data and to
    /// `initial.amplitude` otherwise.
    pub amplitude: Vec<f64>,
    pub workers: usize,
}

/// One point of a sweep, in lexicographic axis order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub b: f64,
    pub alpha: f64,
    pub amplitude: f64,
    pub config: RunConfig,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = parse_pairs(text)?;
        let mut take = |k: &str| pairs.remove(k);
        let b = take("sweep.b");
        let alpha = take("sweep.alpha");
        let amplitude = take("sweep.amplitude");
        let workers = take("sweep.workers");
        if let Some(stray) = pairs.keys().find(|k| k.starts_with("sweep.")) {
            return Err(Error::Config(format!("unknown key '{stray}'")));
        }
        let base = RunConfig::from_pairs(pairs)?;
        let default_amp = if base.initial == InitialKind::GroundStateMultiple {
            base.multiple
        } else {
            base.amplitude
        };
        let cfg = SweepConfig {
            b: b.map(|v| parse_list("sweep.b", &v))
                .transpose()?
                .unwrap_or(vec![base.b]),
            alpha: alpha
                .map(|v| parse_list("sweep.alpha", &v))
                .transpose()?
                .unwrap_or(vec![base.alpha]),
            amplitude: amplitude
                .map(|v| parse_list("sweep.amplitude", &v))
                .transpose()?
                .unwrap_or(vec![default_amp]),
            workers: workers
                .map(|v| parse_num("sweep.workers", &v))
                .transpose()?
                .unwrap_or(1),
            base,
        };
        if cfg.workers == 0 {
            return Err(Error::Config("sweep.workers must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let mut out = Vec::with_capacity(self.b.len() * self.alpha.len() * self.amplitude.len());
        for &b in &self.b {
            for &alpha in &self.alpha {
                for &amp in &self.amplitude {
                    let mut c = self.base.clone();
                    c.b = b;
                    c.alpha = alpha;
                    if c.initial == InitialKind::GroundStateMultiple {
                        c.multiple = amp;
                    } else {
                        c.amplitude = amp;
                    }
                    let index = out.len();
                    c.output_dir = self.base.output_dir.join(format!("point_{index:04}"));
                    c.validate()?;
                    out.push(SweepPoint {
                        index,
                        b,
                        alpha,
                        amplitude: amp,
                        config: c,
                    });
                }
            }
        }
        Ok(out)
    }

    pub fn emit(&self) -> String {
        let mut s = self.base.emit();
        let _ = writeln!(s, "sweep.b = {}", fmt_list(&self.b));
        let _ = writeln!(s, "sweep.alpha = {}", fmt_list(&self.alpha));
        let _ = writeln!(s, "sweep.amplitude = {}", fmt_list(&self.amplitude));
        let _ = writeln!(s, "sweep.workers = {}", self.workers);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
# defocusing gaussian
physics.N = 2
physics.b = 0.5
physics.alpha = 2
physics.sign = defocusing
grid.r_max = 20
grid.points = 256
time.t_final = 2
";

    #[test]
    fn minimal_config_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.time_step(), 20.0 / 256.0 / 4.0);
        assert_eq!(c.initial, InitialKind::Gaussian);
        assert_eq!(c.snapshot_times(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = format!("{MINIMAL}physics.gamma = 3\n");
        let err = RunConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("physics.gamma"), "{err}");
        let err = RunConfig::parse("physics.N = 2\n").unwrap_err().to_string();
        assert!(err.contains("missing required key"), "{err}");
    }

    #[test]
    fn scope_checks() {
        let text = MINIMAL.replace("physics.b = 0.5", "physics.b = 1.5") + "physics.scope = 2d\n";
        let err = RunConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("b out of range"), "{err}");
        let text = MINIMAL.to_string() + "physics.scope = appendix\n";
        assert!(RunConfig::parse(&text).is_err());
        let text = MINIMAL.to_string() + "physics.scope = 2d\n";
        assert!(RunConfig::parse(&text).is_ok());
    }

    #[test]
    fn dt_must_be_below_h() {
        let text = MINIMAL.to_string() + "time.dt = 0.5\n";
        assert!(RunConfig::parse(&text).is_err());
    }

    #[test]
    fn duplicate_and_malformed_lines() {
        let text = MINIMAL.to_string() + "physics.N = 3\n";
        assert!(RunConfig::parse(&text)
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
        let text = MINIMAL.to_string() + "nonsense\n";
        assert!(RunConfig::parse(&text).is_err());
    }

    #[test]
    fn sweep_product_and_defaults() {
        let text = MINIMAL.to_string()
            + "sweep.b = 0.3, 0.5\nsweep.amplitude = 0.5, 1, 2\nsweep.workers = 3\n";
        let s = SweepConfig::parse(&text).unwrap();
        let pts = s.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(s.alpha, vec![2.0]);
        assert_eq!((pts[1].b, pts[1].amplitude), (0.3, 1.0));
        assert_eq!((pts[3].b, pts[3].amplitude), (0.5, 0.5));
        assert!(SweepConfig::parse(&(MINIMAL.to_string() + "sweep.c = 1\n")).is_err());
        assert_eq!(SweepConfig::parse(&s.emit()).unwrap(), s);
    }
}
