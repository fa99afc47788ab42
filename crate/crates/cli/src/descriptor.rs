use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use conformal_flow::dsw::Region;
use conformal_flow::kernel::Order;
use conformal_flow::spaces::SpaceDescriptor;
use conformal_flow::translation::WeightCocycle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Transform,
    Evolve,
    Orbit,
    Dsw,
    Isometry,
    Selftest,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Transform => "transform",
            Command::Evolve => "evolve",
            Command::Orbit => "orbit",
            Command::Dsw => "dsw",
            Command::Isometry => "isometry",
            Command::Selftest => "selftest",
        })
    }
}

/// Rejected before any computation or output.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError(pub String);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn invalid(msg: impl Into<String>) -> ValidationError {
    ValidationError(msg.into())
}

const KEYS: &[&str] = &[
    "alpha",
    "p",
    "kappa",
    "epsilon",
    "n",
    "x_max",
    "seed",
    "tolerance",
    "out",
    "region",
    "targets",
    "family",
    "t_max",
    "inject_negative_control",
];

fn canonical_key(raw: &str) -> Result<&'static str, ValidationError> {
    let key = raw.trim().to_ascii_lowercase().replace('-', "_");
    let key = if key == "output_path" { "out".to_string() } else { key };
    KEYS.iter()
        .find(|k| **k == key)
        .copied()
        .ok_or_else(|| invalid(format!("unknown parameter `{}`", raw.trim())))
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str, origin: &Path) -> Result<BTreeMap<&'static str, String>, ValidationError> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("{}:{}: expected `key = value`", origin.display(), lineno + 1)))?;
        let v = v.trim();
        if v.is_empty() {
            return Err(invalid(format!("{}:{}: empty value", origin.display(), lineno + 1)));
        }
        out.insert(canonical_key(k)?, v.to_string());
    }
    Ok(out)
}

/// Canonical parameter map after config-file values were overridden by flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Parameters {
    values: BTreeMap<&'static str, String>,
}

impl Parameters {
    pub fn from_map(values: BTreeMap<&'static str, String>) -> Self {
        Parameters { values }
    }

    pub fn set(&mut self, key: &'static str, value: impl ToString) {
        self.values.insert(key, value.to_string());
    }

    pub fn echo(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn real(&self, key: &str, default: f64) -> Result<f64, ValidationError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(invalid(format!("{key} must be a finite number, got `{v}`"))),
            },
        }
    }

    fn integer(&self, key: &str, default: u64) -> Result<u64, ValidationError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse::<u64>().map_err(|_| invalid(format!("{key} must be a non-negative integer, got `{v}`"))),
        }
    }

    fn flag(&self, key: &str) -> Result<bool, ValidationError> {
        match self.raw(key) {
            None => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(invalid(format!("{key} must be true or false, got `{v}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolveFamily {
    Exponential,
    Heat,
    Rotation,
    Translation,
}

impl EvolveFamily {
    fn parse(v: &str) -> Result<Self, ValidationError> {
        match v {
            "exponential" => Ok(EvolveFamily::Exponential),
            "heat" => Ok(EvolveFamily::Heat),
            "rotation" => Ok(EvolveFamily::Rotation),
            "translation" => Ok(EvolveFamily::Translation),
            _ => Err(invalid(format!("family must be exponential, heat, rotation or translation, got `{v}`"))),
        }
    }
}

/// Fully validated experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub command: Command,
    /// One entry unless `transform` runs its default sweep.
    pub orders: Vec<Order<f64>>,
    pub space: SpaceDescriptor<f64>,
    pub kappa: WeightCocycle<f64>,
    pub epsilon: f64,
    pub seed: u64,
    pub tolerance: f64,
    pub out: PathBuf,
    pub region: Region<f64>,
    pub targets: usize,
    pub family: EvolveFamily,
    pub t_max: f64,
    pub inject_negative_control: bool,
}

pub const DEFAULT_SEED: u64 = 20_240_601;

struct Defaults {
    alpha: f64,
    p: f64,
    n: u64,
    x_max: f64,
    kappa: f64,
    tolerance: f64,
}

fn defaults(command: Command) -> Defaults {
    let base = Defaults {
        alpha: 0.5,
        p: 2.0,
        n: 2000,
        x_max: 16.0,
        kappa: 1.0,
        tolerance: 1e-8,
    };
    match command {
        Command::Transform => base,
        Command::Evolve => Defaults { tolerance: 1e-10, ..base },
        Command::Orbit => Defaults {
            n: 10_000,
            x_max: 1600.0,
            ..base
        },
        Command::Dsw => Defaults {
            n: 10_000,
            x_max: 3600.0,
            ..base
        },
        Command::Isometry => Defaults {
            n: 10_000,
            x_max: 1600.0,
            tolerance: 1e-6,
            ..base
        },
        Command::Selftest => base,
    }
}

fn parse_region(v: &str) -> Result<Region<f64>, ValidationError> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(invalid(format!("region must be `re_lo,re_hi,im_lo,im_hi`, got `{v}`")));
    }
    let mut xs = [0.0; 4];
    for (x, s) in xs.iter_mut().zip(&parts) {
        *x = s
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| invalid(format!("region bound `{s}` is not a finite number")))?;
    }
    Region::new(xs[0], xs[1], xs[2], xs[3]).map_err(|e| invalid(format!("region: {e}")))
}

impl Experiment {
    pub fn validate(command: Command, parameters: Parameters) -> Result<Self, ValidationError> {
        let d = defaults(command);
        let orders = match (command, parameters.raw("alpha")) {
            (Command::Transform, None) => vec![0.25, 0.5, 1.0],
            _ => vec![parameters.real("alpha", d.alpha)?],
        }
        .into_iter()
        .map(|a| Order::new(a).map_err(|e| invalid(format!("alpha: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
        let p = parameters.real("p", d.p)?;
        let n = parameters.integer("n", d.n)?;
        let n = usize::try_from(n).map_err(|_| invalid("n is too large"))?;
        let x_max = parameters.real("x_max", d.x_max)?;
        let space = SpaceDescriptor::new(p, orders[0], x_max, n).map_err(|e| invalid(e.to_string()))?;
        if command == Command::Evolve && n % 2 != 0 {
            return Err(invalid("evolve needs an even n (the rotation family pairs adjacent nodes)"));
        }
        let kappa_value = parameters.real("kappa", d.kappa)?;
        let kappa = WeightCocycle::new(kappa_value).map_err(|e| invalid(format!("kappa: {e}")))?;
        let epsilon = parameters.real("epsilon", 0.1)?;
        if epsilon <= 0.0 {
            return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        let tolerance = parameters.real("tolerance", d.tolerance)?;
        if tolerance <= 0.0 {
            return Err(invalid(format!("tolerance must be positive, got {tolerance}")));
        }
        let region = parse_region(parameters.raw("region").unwrap_or("-0.5,0.5,-1,1"))?;
        let targets = usize::try_from(parameters.integer("targets", 3)?).map_err(|_| invalid("targets is too large"))?;
        let family = EvolveFamily::parse(parameters.raw("family").unwrap_or("exponential"))?;
        let t_max = parameters.real("t_max", 4.0)?;
        if t_max <= 0.0 {
            return Err(invalid(format!("t_max must be positive, got {t_max}")));
        }
        let out = PathBuf::from(parameters.raw("out").unwrap_or("results"));
        if out.exists() && !out.is_dir() {
            return Err(invalid(format!("output path {} exists and is not a directory", out.display())));
        }
        Ok(Experiment {
            command,
            orders,
            space,
            kappa,
            epsilon,
            seed: parameters.integer("seed", DEFAULT_SEED)?,
            tolerance,
            out,
            region,
            targets,
            family,
            t_max,
            inject_negative_control: parameters.flag("inject_negative_control")?,
        })
    }
}

impl Experiment {
    /// Every effective parameter, defaults included, one `key = value` per line.
    pub fn echo(&self) -> String {
        let alphas: Vec<String> = self.orders.iter().map(|o| o.alpha().to_string()).collect();
        let (re, im) = (self.region.re(), self.region.im());
        let family = match self.family {
            EvolveFamily::Exponential => "exponential",
            EvolveFamily::Heat => "heat",
            EvolveFamily::Rotation => "rotation",
            EvolveFamily::Translation => "translation",
        };
        let mut p = Parameters::default();
        p.set("alpha", alphas.join(","));
        p.set("p", self.space.p());
        p.set("n", self.space.n());
        p.set("x_max", self.space.x_max());
        p.set("kappa", self.kappa.kappa());
        p.set("epsilon", self.epsilon);
        p.set("seed", self.seed);
        p.set("tolerance", format!("{:e}", self.tolerance));
        p.set("out", self.out.display());
        p.set("region", format!("{},{},{},{}", re.0, re.1, im.0, im.1));
        p.set("targets", self.targets);
        p.set("family", family);
        p.set("t_max", self.t_max);
        p.set("inject_negative_control", self.inject_negative_control);
        p.echo()
    }
}
