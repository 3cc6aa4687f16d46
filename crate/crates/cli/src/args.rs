use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hymap", version, about = "Cognitive maps and hypotheses for early-stage startups")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Assessments file (default: <map>.assessments.json next to the map).
    #[arg(long, global = true, value_name = "PATH")]
    pub assessments: Option<PathBuf>,

    /// Disable colored output. Also honored: NO_COLOR.
    #[arg(long, global = true)]
    pub no_color: bool,

    /// Never prompt; fail where input would be needed.
    #[arg(long, global = true, env = "HYMAP_NON_INTERACTIVE")]
    pub non_interactive: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create a map file holding only the product.
    New {
        file: PathBuf,
        /// Product name; asked for when omitted.
        #[arg(long)]
        product: Option<String>,
        /// Overwrite an existing file.
        #[arg(long)]
        force: bool,
    },
    /// Build a map through the guided question protocol.
    Elicit {
        file: PathBuf,
        /// Continue the session recorded in <file>.log.jsonl.
        #[arg(long, conflicts_with = "script")]
        resume: bool,
        /// Replay a recorded session log without prompting.
        #[arg(long, value_name = "LOG")]
        script: Option<PathBuf>,
        /// Session title (default: the file stem).
        #[arg(long)]
        title: Option<String>,
    },
    /// Validate a map and print its structure report.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, env = "HYMAP_FORMAT", default_value = "md")]
        format: OutputFormat,
    },
    /// List the hypotheses implied by a map.
    Hypotheses {
        file: PathBuf,
        #[arg(long, value_enum, env = "HYMAP_FORMAT", default_value = "md")]
        format: OutputFormat,
        /// Order for experimentation: problem, value, product; riskiest first.
        #[arg(long)]
        prioritized: bool,
    },
    /// Record an assessment of one hypothesis.
    Assess {
        file: PathBuf,
        hypothesis: String,
        #[arg(long)]
        status: String,
        /// L, M or H.
        #[arg(long)]
        risk: Option<String>,
        /// Evidence as `kind[:note]`, repeatable.
        #[arg(long, value_name = "KIND[:NOTE]")]
        evidence: Vec<String>,
        /// Assessment time (RFC 3339); default now.
        #[arg(long, value_name = "TIME")]
        at: Option<String>,
    },
    /// Table of hypotheses by kind, status and risk.
    Summary {
        file: PathBuf,
        #[arg(long, value_enum, env = "HYMAP_FORMAT", default_value = "md")]
        format: OutputFormat,
        /// Keep refuted hypotheses in their own row.
        #[arg(long)]
        full: bool,
    },
    /// Draw the map.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: RenderFormat,
        /// Output file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_legend: bool,
        /// Put the product at the bottom instead of the top.
        #[arg(long)]
        product_bottom: bool,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, env = "HYMAP_PORT", default_value_t = hymap_service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, env = "HYMAP_STORAGE", default_value = "hymap-data")]
        storage: PathBuf,
        /// Allowed browser origin, repeatable.
        #[arg(long = "cors-origin", env = "HYMAP_CORS_ORIGIN", value_delimiter = ',')]
        cors_origins: Vec<String>,
    },
}

/// Shared by `check`, `hypotheses` and `summary` so one HYMAP_FORMAT
/// setting works for all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[value(alias = "text", alias = "markdown")]
    Md,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Dot,
    Svg,
    Layout,
}
