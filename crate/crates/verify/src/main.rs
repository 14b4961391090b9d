use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use heatkernel_verify::report::write_traces;
use heatkernel_verify::{emit, run_suite, Format, ScenarioConfig, Suite};

#[derive(Parser, Debug)]
#[command(name = "verify", about = "Run heatkernel verification suites")]
struct Args {
    /// algebra | fixed-point | getzler | duhamel | spectral | torsion | all;
    /// falls back to the config's `suite` key.
    #[arg(long)]
    suite: Option<Suite>,
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let setup = || -> Result<(ScenarioConfig, Suite), String> {
        let mut config = ScenarioConfig::load(&args.config).map_err(|e| format!("{}: {e}", args.config.display()))?;
        let suite = args.suite.or(config.suite).ok_or("no suite given on the command line or in the config")?;
        if let Some(seed) = args.seed {
            config = config.with_seed(seed);
        }
        Ok((config, suite))
    };
    let (config, suite) = match setup() {
        Ok(x) => x,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };

    let report = run_suite(&config, suite);

    let written = (|| -> io::Result<()> {
        match &args.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                emit(&report, args.format, &mut w)?;
                w.flush()?;
            }
            None => emit(&report, args.format, io::stdout().lock())?,
        }
        if let Some(path) = &config.trace_csv {
            write_traces(&report.traces, BufWriter::new(File::create(path)?))?;
        }
        Ok(())
    })();
    if let Err(e) = written {
        eprintln!("verify: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if args.out.is_some() {
        eprintln!("{}", report.summary_line());
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
