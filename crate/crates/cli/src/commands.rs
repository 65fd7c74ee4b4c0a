use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use stathyp::estat::{convergence_series, EstimatePolicy, CSV_HEADER, DEFAULT_PAIR_BUDGET};
use stathyp::relhyp::{
    decompose_counts, decompose_sphere, poincare_partial, DecompositionParams, DecompositionProfile,
    PoincareSeriesReport, DEFAULT_ANNULUS_T,
};
use stathyp::sphere::{growth_report, load_dataset, read_header, EnumerationLimits, SphereMode, SphereStore};
use stathyp::{Error, GroupSpec, Side};

use crate::config::{parse_list, FileConfig};
use crate::{CacheCommand, Cli, Command, Common};

/// Bad invocation (exit status 2).
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

const DEFAULT_SAMPLES: u64 = 100_000;
const DEFAULT_RHO: f64 = 0.4;

pub fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let threads = cli.threads.or(file.threads);
    let cache_dir = cli.cache_dir.clone().or_else(|| file.cache_dir.clone());
    let ctx = Runner {
        file,
        store: SphereStore::new(cache_dir, EnumerationLimits::default()),
    };
    match threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("starting worker threads")?
            .install(|| ctx.dispatch(cli.command)),
        None => ctx.dispatch(cli.command),
    }
}

struct Runner {
    file: FileConfig,
    store: SphereStore,
}

impl Runner {
    fn dispatch(&self, command: Command) -> Result<()> {
        match command {
            Command::Spheres { common, counts_only } => self.spheres(&common, counts_only),
            Command::Estimate {
                common,
                pairs,
                samples,
                seed,
                plot,
            } => self.estimate(&common, pairs, samples, seed, plot),
            Command::Diagnose {
                common,
                rho,
                big_r,
                t,
                s,
                poincare_max,
                poincare_out,
                exhaustive,
            } => self.diagnose(&common, rho, big_r, t, s, poincare_max, poincare_out, exhaustive),
            Command::Growth { common } => self.growth(&common),
            Command::Cache(cmd) => self.cache(cmd),
        }
    }

    fn group(&self, common: &Common) -> Result<GroupSpec> {
        let text = common
            .group
            .as_ref()
            .or(self.file.group.as_ref())
            .ok_or_else(|| usage("--group is required"))?;
        Ok(text.parse::<GroupSpec>()?)
    }

    fn radii(&self, common: &Common) -> Result<Vec<u32>> {
        let text = common
            .radii
            .as_ref()
            .or(self.file.radii.as_ref())
            .ok_or_else(|| usage("--n is required"))?;
        parse_list(text).map_err(|e| usage(format!("{e:#}")))
    }

    fn out(&self, common: &Common) -> Option<PathBuf> {
        common.out.clone().or_else(|| self.file.out.clone())
    }

    fn spheres(&self, common: &Common, counts_only: bool) -> Result<()> {
        let spec = self.group(common)?;
        let radii = self.radii(common)?;
        let mode = if counts_only { SphereMode::CountsOnly } else { SphereMode::Full };
        let mut w = csv_sink(self.out(common).as_deref())?;
        w.write_record(["spec", "n", "count", "checksum"])?;
        for n in radii {
            let ds = self.store.sphere(&spec, n, mode)?;
            w.write_record([spec.to_string(), n.to_string(), ds.count().to_string(), format!("{:016x}", ds.checksum())])?;
        }
        w.flush()?;
        Ok(())
    }

    fn estimate(
        &self,
        common: &Common,
        pairs: Option<u128>,
        samples: Option<u64>,
        seed: Option<u64>,
        plot: Option<PathBuf>,
    ) -> Result<()> {
        let spec = self.group(common)?;
        let radii = self.radii(common)?;
        let policy = EstimatePolicy {
            pair_budget: pairs.or(self.file.pairs).unwrap_or(DEFAULT_PAIR_BUDGET),
            samples: samples.or(self.file.samples).unwrap_or(DEFAULT_SAMPLES),
            seed: seed.or(self.file.seed),
        };
        let series = match convergence_series(&spec, &radii, policy, &self.store) {
            Err(Error::SeedRequired) => return Err(usage("--seed is required when any radius is sampled")),
            other => other?,
        };
        let out = self.out(common);
        let mut w = csv_sink(out.as_deref())?;
        w.write_record(CSV_HEADER)?;
        for r in &series.records {
            w.write_record(r.csv_row())?;
        }
        w.flush()?;
        if let Some(path) = plot.or_else(|| out.as_ref().map(|p| p.with_extension("dat"))) {
            let mut f = create(&path)?;
            writeln!(f, "# n E_n ({spec})")?;
            for r in &series.records {
                writeln!(f, "{} {}", r.n, r.value)?;
            }
            f.flush()?;
        }
        eprintln!(
            "verdict: {}{}",
            series.verdict,
            if series.mixed_methods { " (mixed exact/sampled records)" } else { "" }
        );
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn diagnose(
        &self,
        common: &Common,
        rho: Option<f64>,
        big_r: Option<String>,
        t: Option<f64>,
        s: Option<f64>,
        poincare_max: u32,
        poincare_out: Option<PathBuf>,
        exhaustive: bool,
    ) -> Result<()> {
        let spec = self.group(common)?;
        let radii = self.radii(common)?;
        let rs = match big_r.as_ref().or(self.file.big_r.as_ref()) {
            Some(text) => parse_list(text).map_err(|e| usage(format!("{e:#}")))?,
            None => vec![2],
        };
        let rho = rho.or(self.file.rho).unwrap_or(DEFAULT_RHO);
        let t = t.or(self.file.t).unwrap_or(DEFAULT_ANNULUS_T);
        let limits = self.store.limits();

        let mut profiles = Vec::new();
        for &n in &radii {
            let dataset = if exhaustive { Some(self.store.sphere(&spec, n, SphereMode::Full)?) } else { None };
            for &r in &rs {
                let params = DecompositionParams { rho, big_r: r, t };
                profiles.push(match &dataset {
                    Some(ds) => decompose_sphere(ds, params, limits)?,
                    None => decompose_counts(&spec, n, params, limits)?,
                });
            }
        }

        // Peripheral factors of the free product carrying the decomposition.
        let product = match &spec {
            GroupSpec::Direct(left, _) => left.as_ref(),
            other => other,
        };
        let mut reports = Vec::new();
        if let GroupSpec::FreeProduct(..) = product {
            let exponent = match s {
                Some(s) => s,
                None => growth_report(product, radii.iter().copied().max().unwrap().max(2), limits)?.nu_hat,
            };
            for side in Side::BOTH {
                reports.push(poincare_partial(product, side, exponent, poincare_max, limits)?);
            }
        }

        let out = self.out(common);
        write_profiles(out.as_deref(), &profiles)?;
        let poincare_path = poincare_out.or_else(|| {
            out.as_ref().map(|p| {
                let stem = p.file_stem().unwrap_or_default().to_string_lossy();
                p.with_file_name(format!("{stem}_poincare.csv"))
            })
        });
        if let Some(path) = poincare_path {
            write_poincare(&path, product, &reports)?;
        }
        Ok(())
    }

    fn growth(&self, common: &Common) -> Result<()> {
        let spec = self.group(common)?;
        let n_max = self.radii(common)?.into_iter().max().unwrap();
        let report = growth_report(&spec, n_max, self.store.limits())?;
        let mut w = csv_sink(self.out(common).as_deref())?;
        w.write_record(["spec", "n", "count", "log_rate", "ratio_rate", "sandwich", "nu_hat"])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &report.rows {
            w.write_record([
                spec.to_string(),
                row.n.to_string(),
                row.count.to_string(),
                opt(row.log_rate),
                opt(row.ratio_rate),
                row.sandwich.to_string(),
                report.nu_hat.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    fn cache(&self, cmd: CacheCommand) -> Result<()> {
        match cmd {
            CacheCommand::Inspect { file } => {
                let h = read_header(&file).with_context(|| format!("reading {}", file.display()))?;
                println!("file:     {}", file.display());
                println!("version:  {}", h.version);
                println!("spec:     {}", h.spec);
                println!("radius:   {}", h.radius);
                println!("count:    {}", h.count);
                println!("elements: {}", if h.has_elements { "yes" } else { "no (counts only)" });
                println!("checksum: {:016x}", h.checksum);
                Ok(())
            }
            CacheCommand::Verify { file: Some(file) } => verify(&file),
            CacheCommand::Verify { file: None } => {
                let dir = self
                    .store
                    .cache_dir()
                    .ok_or_else(|| usage("give a file or set --cache-dir"))?;
                let mut files: Vec<_> = fs::read_dir(dir)?
                    .map(|e| e.map(|e| e.path()))
                    .collect::<io::Result<_>>()?;
                files.retain(|p| p.extension().is_some_and(|e| e == "sph"));
                files.sort();
                let mut bad = 0;
                for f in &files {
                    if let Err(e) = verify(f) {
                        eprintln!("{e:#}");
                        bad += 1;
                    }
                }
                if bad > 0 {
                    anyhow::bail!("{bad} of {} cache files failed verification", files.len());
                }
                Ok(())
            }
        }
    }
}

fn verify(path: &Path) -> Result<()> {
    let ds = load_dataset(path, None).with_context(|| format!("{}", path.display()))?;
    println!("ok {} ({} r={} count={})", path.display(), ds.spec(), ds.radius(), ds.count());
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn csv_sink(path: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

/// One row per layer `i`, then a summary row per profile.
fn write_profiles(path: Option<&Path>, profiles: &[DecompositionProfile]) -> Result<()> {
    let mut w = csv_sink(path)?;
    w.write_record([
        "spec", "n", "rho", "offset", "R", "t", "row", "i", "count", "total", "deep_ratio", "theta", "f_proxy", "d_proxy",
    ])?;
    for p in profiles {
        let t = p.annulus.map(|a| a.t.to_string()).unwrap_or_default();
        let head = [p.spec.to_string(), p.n.to_string(), p.rho.to_string(), p.offset.to_string(), p.big_r.to_string(), t];
        for (i, c) in p.counts.iter().enumerate() {
            let mut row = head.to_vec();
            row.extend(["layer".into(), i.to_string(), c.to_string(), p.total.to_string()]);
            row.extend([String::new(), String::new(), String::new(), String::new()]);
            w.write_record(&row)?;
        }
        let mut row = head.to_vec();
        row.extend([
            "summary".into(),
            String::new(),
            p.counts.iter().sum::<u128>().to_string(),
            p.total.to_string(),
            p.deep_ratio.to_string(),
            p.theta.to_string(),
            p.f_proxy.to_string(),
            p.d_proxy.to_string(),
        ]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_poincare(path: &Path, spec: &GroupSpec, reports: &[PoincareSeriesReport]) -> Result<()> {
    let mut w = csv_sink(Some(path))?;
    w.write_record(["spec", "factor", "s", "row", "N", "count", "partial_sum", "tail_flatness"])?;
    for r in reports {
        let head = [spec.to_string(), r.factor.to_string(), r.s.to_string()];
        for (n, (c, a)) in r.counts.iter().zip(&r.partial_sums).enumerate() {
            let mut row = head.to_vec();
            row.extend(["partial".into(), n.to_string(), c.to_string(), a.to_string(), String::new()]);
            w.write_record(&row)?;
        }
        let mut row = head.to_vec();
        row.extend([
            "summary".into(),
            r.n_max().to_string(),
            String::new(),
            r.partial_sums.last().unwrap().to_string(),
            r.tail_flatness.to_string(),
        ]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
