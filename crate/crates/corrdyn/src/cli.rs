//! Command-line frontend: flag/config-file parsing into a validated
//! [`RunConfig`], dispatch to the owning module, file emission, and the
//! one-line JSON run summary.
//!
//! Exit codes: 0 success, 1 computational failure, 2 usage error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Arg, ArgAction, Command as ClapCommand};

use crate::cifs;
use crate::corr::{Cx, MatingCoords, PowerCorr, RationalExp};
use crate::error::{Error, Result};
use crate::mating;
use crate::orbit::EscapeParams;
use crate::parallel::WorkerPool;
use crate::raster::{self, BoundaryMode, GridSpec, JuliaLabel, ParamSetVariant};
use crate::sturmian::{self, ContinuedFraction, DiskVariant};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Julia,
    Filled,
    Mset,
    Limitset,
    YoccozDisks,
    YoccozVerify,
    Sturmian,
    Minkowski,
    Cifs,
    Motion,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Julia => "julia",
            CommandKind::Filled => "filled",
            CommandKind::Mset => "mset",
            CommandKind::Limitset => "limitset",
            CommandKind::YoccozDisks => "yoccoz-disks",
            CommandKind::YoccozVerify => "yoccoz-verify",
            CommandKind::Sturmian => "sturmian",
            CommandKind::Minkowski => "minkowski",
            CommandKind::Cifs => "cifs",
            CommandKind::Motion => "motion",
        }
    }
}

/// Fully resolved run configuration. `raw` keeps the resolved key/value view
/// for the `<out>.meta` sidecar.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub raw: BTreeMap<String, String>,

    pub p: u32,
    pub q: u32,
    pub c: Cx,
    pub a: Cx,
    pub center: Cx,
    pub width: f64,
    pub px: u32,
    pub py: u32,
    pub depth: u32,
    pub budget: u64,
    pub radius: Option<f64>,
    pub out: Option<PathBuf>,
    pub palette: String,
    pub workers: usize,

    pub mode: String,
    pub seed: Option<Cx>,
    pub nodes: u64,
    pub variant: String,
    pub sub_px: u32,
    pub coords: MatingCoords,
    pub p_buffer: f64,
    pub qmax: u64,
    pub extra: Vec<(u64, u64)>,
    pub d: u32,
    pub m: u32,
    pub cf: String,
    pub bits: u32,
    pub tolerance: f64,
    pub c_end: Cx,
    pub steps: u32,
    pub points: usize,
    pub period_max: u32,
    pub csv: Option<PathBuf>,
}

fn parse_cx(s: &str) -> Result<Cx> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Usage(format!(
            "complex values are written re,im; got `{s}`"
        )));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("bad real part in `{s}`")))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("bad imaginary part in `{s}`")))?;
    Ok(Cx::new(re, im))
}

fn parse_fraction_list(s: &str) -> Result<Vec<(u64, u64)>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|item| {
            let parts: Vec<&str> = item.trim().split('/').collect();
            if parts.len() != 2 {
                return Err(Error::Usage(format!("fractions are written p/q; got `{item}`")));
            }
            let p = parts[0].trim().parse().map_err(|_| Error::Usage(format!("bad p in `{item}`")))?;
            let q = parts[1].trim().parse().map_err(|_| Error::Usage(format!("bad q in `{item}`")))?;
            Ok((p, q))
        })
        .collect()
}

/// Parse a continued-fraction literal: `[x0]`, `[x0;a,b,c]`, optionally with
/// a periodic tail in parentheses: `[1;(1)]`, `[0;2,(1,4)]`.
pub fn parse_cf(s: &str) -> Result<ContinuedFraction> {
    let body = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Usage(format!("continued fractions are written [x0;a,b,...]; got `{s}`")))?;
    let (head, rest) = match body.split_once(';') {
        Some((h, r)) => (h, Some(r)),
        None => (body, None),
    };
    let x0: u32 = head
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("bad x0 in `{s}`")))?;
    let mut partials = Vec::new();
    let mut tail = None;
    if let Some(rest) = rest {
        let rest = rest.trim();
        let (finite_part, tail_part) = match rest.find('(') {
            Some(i) => {
                let t = rest[i..]
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| Error::Usage(format!("unclosed periodic tail in `{s}`")))?;
                (rest[..i].trim_end_matches(','), Some(t))
            }
            None => (rest, None),
        };
        for item in finite_part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            partials.push(
                item.parse()
                    .map_err(|_| Error::Usage(format!("bad partial `{item}` in `{s}`")))?,
            );
        }
        if let Some(t) = tail_part {
            let mut tl = Vec::new();
            for item in t.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                tl.push(
                    item.parse()
                        .map_err(|_| Error::Usage(format!("bad tail partial `{item}` in `{s}`")))?,
                );
            }
            tail = Some(tl);
        }
    }
    // Canonicalize non-canonical finite literals: [..., a, 1] = [..., a+1]
    // and [x0; 1] = [x0+1].
    let mut x0 = x0;
    if tail.is_none() {
        while partials.last() == Some(&1) && partials.len() >= 2 {
            partials.pop();
            *partials.last_mut().unwrap() += 1;
        }
        if partials == [1] {
            partials.clear();
            x0 += 1;
        }
    }
    ContinuedFraction::new(x0, partials, tail).map_err(|e| Error::Usage(e.to_string()))
}

fn flag(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).action(ArgAction::Set).help(help)
}

fn command_spec(kind: CommandKind) -> ClapCommand {
    let base = ClapCommand::new(kind.name()).disable_help_flag(false);
    let with_common = |c: ClapCommand| {
        c.arg(flag("config", "flat key = value config file; flags override"))
            .arg(flag("workers", "worker count (default: logical CPUs)"))
            .arg(flag("out", "output path"))
            .arg(flag("palette", "palette name: default | mono"))
            .arg(flag("csv", "also export the label matrix as CSV to this path"))
    };
    let with_grid = |c: ClapCommand| {
        c.arg(flag("center", "window center as re,im"))
            .arg(flag("width", "window width"))
            .arg(flag("px", "horizontal pixels"))
            .arg(flag("py", "vertical pixels (default: px)"))
    };
    let with_engine = |c: ClapCommand| {
        c.arg(flag("depth", "orbit tree depth"))
            .arg(flag("budget", "node budget per query"))
            .arg(flag("radius", "escape radius override (clamped to be sound)"))
    };
    let with_power = |c: ClapCommand| {
        c.arg(flag("p", "exponent numerator"))
            .arg(flag("q", "exponent denominator"))
            .arg(flag("c", "parameter c as re,im"))
    };
    match kind {
        CommandKind::Julia => with_common(with_engine(with_grid(with_power(base))))
            .arg(flag("mode", "boundary | backward"))
            .arg(flag("seed", "backward-mode seed as re,im (default: found)"))
            .arg(flag("nodes", "backward-mode node count")),
        CommandKind::Filled => with_common(with_engine(with_grid(with_power(base)))),
        CommandKind::Mset => with_common(with_engine(with_grid(
            base.arg(flag("p", "exponent numerator"))
                .arg(flag("q", "exponent denominator")),
        )))
        .arg(flag("variant", "m0 (orbit of 0) | m (connectivity heuristic)"))
        .arg(flag("sub-px", "sub-resolution for the m heuristic")),
        CommandKind::Limitset => with_common(with_engine(with_grid(
            base.arg(flag("a", "mating parameter as re,im")),
        )))
        .arg(flag("coords", "original | covj"))
        .arg(flag("p-buffer", "near-P membership buffer radius")),
        CommandKind::YoccozDisks => with_common(
            base.arg(flag("qmax", "largest denominator"))
                .arg(flag("extra", "extra fractions, e.g. 1/16;2/9"))
                .arg(flag("variant", "mating | classical"))
                .arg(flag("d", "classical variant: polynomial degree"))
                .arg(flag("m", "classical variant: ray-cycle count")),
        ),
        CommandKind::YoccozVerify => with_common(
            base.arg(flag("a", "mating parameter as re,im"))
                .arg(flag("qmax", "largest denominator")),
        ),
        CommandKind::Sturmian => with_common(
            base.arg(flag("p", "rotation number numerator"))
                .arg(flag("q", "rotation number denominator")),
        ),
        CommandKind::Minkowski => with_common(
            base.arg(flag("cf", "continued fraction, e.g. [1;1,1,1] or [1;(1)]"))
                .arg(flag("bits", "precision bits")),
        ),
        CommandKind::Cifs => with_common(with_power(base).arg(flag("tolerance", "hull tolerance"))),
        CommandKind::Motion => with_common(
            with_power(base)
                .arg(flag("c-end", "path endpoint as re,im (path starts at 0)"))
                .arg(flag("steps", "path steps"))
                .arg(flag("points", "seed count"))
                .arg(flag("period-max", "largest seeded period (cap 12)")),
        ),
    }
}

fn accepted_keys(kind: CommandKind) -> Vec<&'static str> {
    let mut keys = vec!["workers", "out", "palette", "csv"];
    match kind {
        CommandKind::Julia => keys.extend([
            "p", "q", "c", "center", "width", "px", "py", "depth", "budget", "radius", "mode",
            "seed", "nodes",
        ]),
        CommandKind::Filled => keys.extend([
            "p", "q", "c", "center", "width", "px", "py", "depth", "budget", "radius",
        ]),
        CommandKind::Mset => keys.extend([
            "p", "q", "center", "width", "px", "py", "depth", "budget", "radius", "variant",
            "sub-px",
        ]),
        CommandKind::Limitset => keys.extend([
            "a", "center", "width", "px", "py", "depth", "budget", "radius", "coords", "p-buffer",
        ]),
        CommandKind::YoccozDisks => keys.extend(["qmax", "extra", "variant", "d", "m"]),
        CommandKind::YoccozVerify => keys.extend(["a", "qmax"]),
        CommandKind::Sturmian => keys.extend(["p", "q"]),
        CommandKind::Minkowski => keys.extend(["cf", "bits"]),
        CommandKind::Cifs => keys.extend(["p", "q", "c", "tolerance"]),
        CommandKind::Motion => keys.extend(["p", "q", "c-end", "steps", "points", "period-max"]),
    }
    keys
}

fn read_config_file(path: &str) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read config file {path}: {e}")))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Usage(format!(
                "config line {} is not `key = value`: `{line}`",
                lineno + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Parse argv (and the optional config file named by --config) into a
/// validated RunConfig. Flags override config keys; unknown config keys are
/// usage errors.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let kinds = [
        CommandKind::Julia,
        CommandKind::Filled,
        CommandKind::Mset,
        CommandKind::Limitset,
        CommandKind::YoccozDisks,
        CommandKind::YoccozVerify,
        CommandKind::Sturmian,
        CommandKind::Minkowski,
        CommandKind::Cifs,
        CommandKind::Motion,
    ];
    let mut root = ClapCommand::new("corrdyn")
        .about("dynamics of multivalued power maps and modular-group matings")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for k in kinds {
        root = root.subcommand(command_spec(k));
    }
    let matches = root
        .try_get_matches_from(argv)
        .map_err(|e| Error::Usage(e.to_string().lines().next().unwrap_or("bad arguments").to_string()))?;
    let (sub_name, sub) = matches
        .subcommand()
        .ok_or_else(|| Error::Usage("a subcommand is required".into()))?;
    let kind = kinds
        .into_iter()
        .find(|k| k.name() == sub_name)
        .ok_or_else(|| Error::Usage(format!("unknown command {sub_name}")))?;

    // Merge: command line wins over config file.
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    if let Some(path) = sub.get_one::<String>("config") {
        let file = read_config_file(path)?;
        let accepted = accepted_keys(kind);
        for (k, v) in file {
            if !accepted.contains(&k.as_str()) {
                return Err(Error::Usage(format!(
                    "unknown config key `{k}` for command {}",
                    kind.name()
                )));
            }
            kv.insert(k, v);
        }
    }
    for id in sub.ids() {
        let name = id.as_str().to_string();
        if name == "config" {
            continue;
        }
        if let Ok(Some(v)) = sub.try_get_one::<String>(id.as_str()) {
            kv.insert(name, v.clone());
        }
    }

    build_config(kind, kv)
}

fn get_parse<T: std::str::FromStr>(
    kv: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T> {
    match kv.get(key) {
        None => Ok(default),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("bad value for {key}: `{s}`"))),
    }
}

fn get_cx(kv: &BTreeMap<String, String>, key: &str, default: Cx) -> Result<Cx> {
    match kv.get(key) {
        None => Ok(default),
        Some(s) => parse_cx(s).map_err(|_| Error::Usage(format!("bad value for {key}: `{s}` (want re,im)"))),
    }
}

fn build_config(kind: CommandKind, kv: BTreeMap<String, String>) -> Result<RunConfig> {
    let p: u32 = get_parse(&kv, "p", 2)?;
    let q: u32 = get_parse(&kv, "q", 1)?;
    if q == 0 {
        return Err(Error::Usage("q must be ≥ 1".into()));
    }
    let needs_exp = matches!(
        kind,
        CommandKind::Julia | CommandKind::Filled | CommandKind::Mset | CommandKind::Cifs | CommandKind::Motion
    );
    if needs_exp && p <= q {
        return Err(Error::Usage(format!("p must exceed q (got p = {p}, q = {q})")));
    }
    if kind == CommandKind::Sturmian && p >= q {
        return Err(Error::Usage(format!("sturmian needs 0 < p < q (got {p}/{q})")));
    }
    let px: u32 = get_parse(&kv, "px", 512)?;
    let py: u32 = get_parse(&kv, "py", px)?;
    if px == 0 || py == 0 {
        return Err(Error::Usage("px and py must be ≥ 1".into()));
    }
    let width: f64 = get_parse(
        &kv,
        "width",
        match kind {
            CommandKind::Mset => 4.0,
            _ => 3.0,
        },
    )?;
    if width <= 0.0 {
        return Err(Error::Usage("width must be positive".into()));
    }
    let depth: u32 = get_parse(
        &kv,
        "depth",
        match kind {
            CommandKind::Limitset => 24,
            _ => tol::DEFAULT_MAX_DEPTH,
        },
    )?;
    if depth == 0 {
        return Err(Error::Usage("depth must be ≥ 1".into()));
    }
    let workers: usize = get_parse(&kv, "workers", WorkerPool::default_size())?;
    if workers == 0 {
        return Err(Error::Usage("workers must be ≥ 1".into()));
    }
    let palette = kv.get("palette").cloned().unwrap_or_else(|| "default".into());
    if palette != "default" && palette != "mono" {
        return Err(Error::Usage(format!("unknown palette `{palette}`")));
    }
    let mode = kv.get("mode").cloned().unwrap_or_else(|| "boundary".into());
    if kind == CommandKind::Julia && mode != "boundary" && mode != "backward" {
        return Err(Error::Usage(format!("mode must be boundary or backward, got `{mode}`")));
    }
    let variant = kv.get("variant").cloned().unwrap_or_else(|| {
        match kind {
            CommandKind::Mset => "m0",
            _ => "mating",
        }
        .into()
    });
    match kind {
        CommandKind::Mset if variant != "m0" && variant != "m" => {
            return Err(Error::Usage(format!("variant must be m0 or m, got `{variant}`")));
        }
        CommandKind::YoccozDisks if variant != "mating" && variant != "classical" => {
            return Err(Error::Usage(format!(
                "variant must be mating or classical, got `{variant}`"
            )));
        }
        _ => {}
    }
    let coords = match kv.get("coords").map(String::as_str).unwrap_or("original") {
        "original" => MatingCoords::Original,
        "covj" => MatingCoords::CovJ,
        other => return Err(Error::Usage(format!("coords must be original or covj, got `{other}`"))),
    };
    let qmax: u64 = get_parse(&kv, "qmax", 8)?;
    if qmax < 2 {
        return Err(Error::Usage("qmax must be ≥ 2".into()));
    }
    let period_max: u32 = get_parse(&kv, "period-max", 6)?;
    if period_max > 12 {
        return Err(Error::Usage("period-max is capped at 12".into()));
    }
    let steps: u32 = get_parse(&kv, "steps", 8)?;
    if steps == 0 {
        return Err(Error::Usage("steps must be ≥ 1".into()));
    }
    let bits: u32 = get_parse(&kv, "bits", 256)?;

    let seed = match kv.get("seed") {
        None => None,
        Some(s) => Some(parse_cx(s)?),
    };
    let radius = match kv.get("radius") {
        None => None,
        Some(s) => Some(
            s.parse::<f64>()
                .map_err(|_| Error::Usage(format!("bad value for radius: `{s}`")))?,
        ),
    };

    let config = RunConfig {
        command: kind,
        p,
        q,
        c: get_cx(&kv, "c", Cx::new(0.0, 0.0))?,
        a: get_cx(&kv, "a", Cx::new(5.0, 0.0))?,
        center: get_cx(
            &kv,
            "center",
            match kind {
                CommandKind::Mset => Cx::new(-0.5, 0.0),
                _ => Cx::new(0.0, 0.0),
            },
        )?,
        width,
        px,
        py,
        depth,
        budget: get_parse(&kv, "budget", tol::DEFAULT_NODE_BUDGET)?,
        radius,
        out: kv.get("out").map(PathBuf::from),
        palette,
        workers,
        mode,
        seed,
        nodes: get_parse(&kv, "nodes", 100_000u64)?,
        variant,
        sub_px: get_parse(&kv, "sub-px", 64u32)?,
        coords,
        p_buffer: get_parse(&kv, "p-buffer", tol::NEAR_P_BUFFER)?,
        qmax,
        extra: parse_fraction_list(kv.get("extra").map(String::as_str).unwrap_or(""))?,
        d: get_parse(&kv, "d", 2)?,
        m: get_parse(&kv, "m", 1)?,
        cf: kv.get("cf").cloned().unwrap_or_else(|| "[1;(1)]".into()),
        bits,
        tolerance: get_parse(&kv, "tolerance", 1e-6)?,
        c_end: get_cx(&kv, "c-end", Cx::new(0.01, 0.0))?,
        steps,
        points: get_parse(&kv, "points", 8usize)?,
        period_max,
        csv: kv.get("csv").map(PathBuf::from),
        raw: kv,
    };
    Ok(config)
}

fn mono_palette(label: JuliaLabel) -> [u8; 3] {
    match label {
        JuliaLabel::Inside => [0, 0, 0],
        JuliaLabel::Outside => [255, 255, 255],
        JuliaLabel::Boundary => [0, 0, 0],
        JuliaLabel::Unknown => [180, 180, 180],
    }
}

fn write_meta(config: &RunConfig, out: &std::path::Path) -> Result<Vec<String>> {
    let meta_path = {
        let mut s = out.as_os_str().to_owned();
        s.push(".meta");
        PathBuf::from(s)
    };
    let mut text = format!("command = {}\n", config.command.name());
    for (k, v) in &config.raw {
        text.push_str(&format!("{k} = {v}\n"));
    }
    std::fs::write(&meta_path, text)?;
    Ok(vec![meta_path.display().to_string()])
}

fn require_out(config: &RunConfig) -> Result<PathBuf> {
    config
        .out
        .clone()
        .ok_or_else(|| Error::Usage("--out is required for this command".into()))
}

/// Execute a parsed run. Returns the JSON summary that `main` prints.
pub fn run(config: &RunConfig) -> Result<serde_json::Value> {
    let start = Instant::now();
    let pool = WorkerPool::new(config.workers);
    let mut outputs: Vec<String> = Vec::new();
    let mut metrics = serde_json::Map::new();

    match config.command {
        CommandKind::Filled | CommandKind::Julia => {
            let corr = PowerCorr::new(config.p, config.q, config.c)
                .map_err(|e| Error::Usage(e.to_string()))?;
            let grid = GridSpec::new(config.center, config.width, config.px, config.py)
                .map_err(|e| Error::Usage(e.to_string()))?;
            let params = EscapeParams::clamped(
                &corr,
                config.radius.unwrap_or(0.0),
                config.depth,
                config.budget,
            );
            let raster = if config.command == CommandKind::Filled {
                raster::render_filled_julia(&corr, &grid, &params, &pool)
            } else if config.mode == "backward" {
                raster::render_julia_boundary(
                    &corr,
                    &grid,
                    &params,
                    BoundaryMode::Backward { seed: config.seed, nodes: config.nodes },
                    &pool,
                )?
            } else {
                raster::render_julia_boundary(&corr, &grid, &params, BoundaryMode::FromFilled, &pool)?
            };
            let inside = raster
                .labels
                .iter()
                .filter(|l| matches!(l, JuliaLabel::Inside | JuliaLabel::Boundary))
                .count();
            let boundary = raster.labels.iter().filter(|l| **l == JuliaLabel::Boundary).count();
            let unknown = raster.labels.iter().filter(|l| **l == JuliaLabel::Unknown).count();
            metrics.insert("inside_pixels".into(), inside.into());
            metrics.insert("boundary_pixels".into(), boundary.into());
            metrics.insert("unknown_pixels".into(), unknown.into());
            if config.command == CommandKind::Filled {
                if let Ok(class) = raster::classify_set(&raster) {
                    metrics.insert("classification".into(), format!("{:?}", class.verdict).into());
                    metrics.insert("components_inside".into(), class.components_inside.into());
                    metrics.insert(
                        "components_complement".into(),
                        class.components_complement.into(),
                    );
                }
            }
            // Deviation of boundary pixels from the unit circle, in pixel
            // widths (meaningful at c = 0 where J is the circle).
            if config.c.norm() == 0.0 {
                let pw = grid.pixel_width();
                let mut dev = 0.0f64;
                for y in 0..grid.py {
                    for x in 0..grid.px {
                        if raster.get(x, y) == JuliaLabel::Boundary {
                            let z = grid.point(x, y);
                            dev = dev.max((z.norm() - 1.0).abs() / pw);
                        }
                    }
                }
                metrics.insert(
                    "circle_deviation_px".into(),
                    serde_json::Number::from_f64(dev).unwrap_or_else(|| 0.into()).into(),
                );
            }
            let out = require_out(config)?;
            let palette = config.palette.clone();
            raster::write_ppm(
                &raster,
                move |l| {
                    if palette == "mono" {
                        mono_palette(l)
                    } else {
                        raster::julia_palette(l)
                    }
                },
                &out,
            )?;
            outputs.push(out.display().to_string());
            if let Some(csv) = &config.csv {
                std::fs::write(csv, raster::label_csv(&raster, JuliaLabel::name))?;
                outputs.push(csv.display().to_string());
            }
            outputs.extend(write_meta(config, &out)?);
        }
        CommandKind::Mset => {
            let exp = RationalExp::new(config.p, config.q).map_err(|e| Error::Usage(e.to_string()))?;
            let grid = GridSpec::new(config.center, config.width, config.px, config.py)
                .map_err(|e| Error::Usage(e.to_string()))?;
            let probe = PowerCorr { exp, c: config.center };
            let params = EscapeParams::clamped(
                &probe,
                config.radius.unwrap_or(0.0),
                config.depth,
                config.budget,
            );
            let variant = if config.variant == "m" {
                ParamSetVariant::MBeta { sub_px: config.sub_px }
            } else {
                ParamSetVariant::MBetaZero
            };
            let raster = raster::render_parameter_set(exp, &grid, &params, &variant, &pool);
            let inside = raster
                .labels
                .iter()
                .filter(|l| matches!(l, JuliaLabel::Inside | JuliaLabel::Boundary))
                .count();
            metrics.insert("inside_pixels".into(), inside.into());
            let out = require_out(config)?;
            raster::write_ppm(&raster, raster::julia_palette, &out)?;
            outputs.push(out.display().to_string());
            if let Some(csv) = &config.csv {
                std::fs::write(csv, raster::label_csv(&raster, JuliaLabel::name))?;
                outputs.push(csv.display().to_string());
            }
            outputs.extend(write_meta(config, &out)?);
        }
        CommandKind::Limitset => {
            let grid = GridSpec::new(config.center, config.width, config.px, config.py)
                .map_err(|e| Error::Usage(e.to_string()))?;
            let opts = mating::LimitSetOptions {
                p_buffer: config.p_buffer,
                node_budget: config.budget,
            };
            let out_raster =
                mating::render_limit_sets(config.a, &grid, config.depth, config.coords, opts, &pool)?;
            let count = |label: mating::LimitLabel| {
                out_raster.raster.labels.iter().filter(|l| **l == label).count()
            };
            metrics.insert("lambda_minus_pixels".into(), count(mating::LimitLabel::LambdaMinus).into());
            metrics.insert("lambda_plus_pixels".into(), count(mating::LimitLabel::LambdaPlus).into());
            metrics.insert("unknown_pixels".into(), count(mating::LimitLabel::Unknown).into());
            metrics.insert(
                "shared_pixels".into(),
                out_raster.shared.iter().filter(|s| **s).count().into(),
            );
            // Report the fundamental-domain health alongside the render.
            let domains = mating::standard_domains(config.a)?;
            let klein = mating::klein_check(&domains, 2000);
            metrics.insert("klein_pass".into(), klein.pass.into());
            metrics.insert(
                "klein_covered_fraction".into(),
                serde_json::Number::from_f64(klein.covered_fraction)
                    .unwrap_or_else(|| 0.into())
                    .into(),
            );
            let out = require_out(config)?;
            raster::write_ppm(&out_raster.raster, mating::limit_palette, &out)?;
            outputs.push(out.display().to_string());
            if let Some(csv) = &config.csv {
                std::fs::write(csv, raster::label_csv(&out_raster.raster, mating::LimitLabel::name))?;
                outputs.push(csv.display().to_string());
            }
            outputs.extend(write_meta(config, &out)?);
        }
        CommandKind::YoccozDisks => {
            let variant = if config.variant == "classical" {
                DiskVariant::Classical { d: config.d, m: config.m }
            } else {
                DiskVariant::Mating
            };
            let csv = sturmian::emit_disk_family(config.qmax, &config.extra, variant)?;
            let rows = csv.lines().count() - 1;
            metrics.insert("disk_count".into(), rows.into());
            let out = require_out(config)?;
            std::fs::write(&out, &csv)?;
            outputs.push(out.display().to_string());
            outputs.extend(write_meta(config, &out)?);
        }
        CommandKind::YoccozVerify => {
            let report = mating::yoccoz_verify(config.a, config.qmax)?;
            metrics.insert("checked_fixed_points".into(), report.checks.len().into());
            metrics.insert("no_repelling".into(), report.no_repelling.into());
            metrics.insert(
                "all_pass".into(),
                report.checks.iter().all(|c| c.pass).into(),
            );
            if let Some(out) = &config.out {
                std::fs::write(out, mating::yoccoz_csv(&report))?;
                outputs.push(out.display().to_string());
                outputs.extend(write_meta(config, out)?);
            }
        }
        CommandKind::Sturmian => {
            let word = sturmian::sturmian_word(config.p as u64, config.q as u64)?;
            let wm = sturmian::word_matrix(&word);
            metrics.insert("word".into(), word.digits().into());
            metrics.insert("trace".into(), wm.trace().to_string().into());
            if let Some(ev) = wm.dominant_eigenvalue() {
                metrics.insert(
                    "eigenvalue".into(),
                    serde_json::Number::from_f64(ev).unwrap_or_else(|| 0.into()).into(),
                );
            }
        }
        CommandKind::Minkowski => {
            let cf = parse_cf(&config.cf)?;
            let h = sturmian::minkowski_h(&cf, config.bits)?;
            metrics.insert(
                "h".into(),
                serde_json::Number::from_f64(h.to_f64()).unwrap_or_else(|| 0.into()).into(),
            );
            metrics.insert("bits".into(), config.bits.into());
            metrics.insert("numerator".into(), h.numerator.to_string().into());
            let check = sturmian::h_conjugacy_check(&cf, config.bits)?;
            metrics.insert("conjugacy_pass".into(), check.pass.into());
        }
        CommandKind::Cifs => {
            let exp = RationalExp::new(config.p, config.q).map_err(|e| Error::Usage(e.to_string()))?;
            let data = cifs::build_cifs(exp, config.c)?;
            let s_star = cifs::hausdorff_upper_bound(&data);
            metrics.insert(
                "rho".into(),
                serde_json::Number::from_f64(data.outer.radius).unwrap_or_else(|| 0.into()).into(),
            );
            metrics.insert(
                "r".into(),
                serde_json::Number::from_f64(data.contraction).unwrap_or_else(|| 0.into()).into(),
            );
            metrics.insert(
                "s_star".into(),
                serde_json::Number::from_f64(s_star).unwrap_or_else(|| 0.into()).into(),
            );
            let pts = cifs::dual_julia_points(exp, config.c, config.tolerance)?;
            metrics.insert("attractor_points".into(), pts.len().into());
            if let Some(out) = &config.out {
                // Per-generation Hutchinson history up to a sample cap.
                let corr = PowerCorr { exp, c: config.c };
                let mut csv = String::new();
                for g in 0.. {
                    let sample = cifs::hutchinson_iterate(&data, &corr, config.c, g)?;
                    let body = cifs::attractor_csv(&sample);
                    if g == 0 {
                        csv.push_str(&body);
                    } else {
                        csv.push_str(body.split_once('\n').map(|(_, b)| b).unwrap_or(""));
                    }
                    if sample.points.len() >= pts.len() || sample.points.len() > 20_000 {
                        break;
                    }
                }
                std::fs::write(out, csv)?;
                outputs.push(out.display().to_string());
                let dim_path = out.with_extension("dim.csv");
                std::fs::write(&dim_path, cifs::dimension_csv(exp, config.c, &data))?;
                outputs.push(dim_path.display().to_string());
                outputs.extend(write_meta(config, out)?);
            }
        }
        CommandKind::Motion => {
            let exp = RationalExp::new(config.p, config.q).map_err(|e| Error::Usage(e.to_string()))?;
            let path: Vec<Cx> = (0..=config.steps)
                .map(|i| config.c_end * (i as f64 / config.steps as f64))
                .collect();
            let sample = cifs::branched_motion_sample(exp, &path, config.points, config.period_max)?;
            metrics.insert("tracks".into(), sample.tracks.len().into());
            metrics.insert("collisions".into(), sample.collisions.len().into());
            metrics.insert(
                "failed_tracks".into(),
                sample.tracks.iter().filter(|t| t.failure.is_some()).count().into(),
            );
            if let Some(out) = &config.out {
                std::fs::write(out, cifs::motion_csv(&sample))?;
                outputs.push(out.display().to_string());
                outputs.extend(write_meta(config, out)?);
            }
        }
    }

    Ok(serde_json::json!({
        "command": config.command.name(),
        "wall_ms": start.elapsed().as_millis() as u64,
        "outputs": outputs,
        "metrics": metrics,
    }))
}

/// Entry point used by the binary: returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_config(argv) {
        Err(e) => {
            eprintln!("{e}");
            2
        }
        Ok(config) => match run(&config) {
            Ok(summary) => {
                println!("{summary}");
                0
            }
            Err(Error::Usage(msg)) => {
                eprintln!("usage error: {msg}");
                2
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_julia_flags() {
        let config = parse_config([
            "corrdyn", "julia", "--p", "5", "--q", "2", "--c", "0.05,0", "--px", "512", "--out",
            "/tmp/j.ppm",
        ])
        .unwrap();
        assert_eq!(config.command, CommandKind::Julia);
        assert_eq!(config.p, 5);
        assert_eq!(config.q, 2);
        assert_eq!(config.c, Cx::new(0.05, 0.0));
        assert_eq!(config.px, 512);
    }

    #[test]
    fn rejects_zero_q() {
        let err = parse_config(["corrdyn", "julia", "--p", "2", "--q", "0"]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("q must be ≥ 1"), "got: {msg}");
    }

    #[test]
    fn config_file_merge_and_override() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "px = 256\nq = 2\n# comment\nwidth = 3.5\n").unwrap();
        let config = parse_config([
            "corrdyn",
            "filled",
            "--p",
            "5",
            "--config",
            path.to_str().unwrap(),
            "--px",
            "512",
        ])
        .unwrap();
        assert_eq!(config.px, 512, "flag must override config");
        assert_eq!(config.q, 2, "config value must apply");
        assert!((config.width - 3.5).abs() < 1e-12);
    }

    #[test]
    fn unknown_config_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "pixels = 256\n").unwrap();
        let err = parse_config([
            "corrdyn",
            "filled",
            "--p",
            "3",
            "--q",
            "2",
            "--config",
            path.to_str().unwrap(),
        ])
        .unwrap_err();
        assert!(err.to_string().contains("unknown config key"));
    }

    #[test]
    fn parse_cf_literals() {
        // Non-canonical finite literals canonicalize: [1;1,1,1] = 5/3 = [1;1,2].
        let cf = parse_cf("[1;1,1,1]").unwrap();
        assert_eq!(cf.x0, 1);
        assert_eq!(cf.partials, vec![1, 2]);
        let cf2 = parse_cf("[1;(1)]").unwrap();
        assert_eq!(cf2.periodic_tail, Some(vec![1]));
        let cf3 = parse_cf("[0;2,(1,4)]").unwrap();
        assert_eq!(cf3.partials, vec![2]);
        assert_eq!(cf3.periodic_tail, Some(vec![1, 4]));
        assert_eq!(parse_cf("[2;1]").unwrap().x0, 3);
        assert!(parse_cf("1;2").is_err());
    }
}
