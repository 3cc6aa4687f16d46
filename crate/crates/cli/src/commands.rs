use std::fmt::Write as _;
use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};

use hymap_core::dsl::{self, import_json, Stage};
use hymap_core::elicitation::{log, Answer, ElicitationSession, Phase, DEFAULT_NODE_BUDGET};
use hymap_core::hypogen::{self, Hypothesis, HypothesisId};
use hymap_core::model::has_errors;
use hymap_core::registry::{self, Evidence, Registry, Risk, Status, SummaryMode};
use hymap_core::render::{self, Format, Orientation, RenderOptions};
use hymap_core::{structure_report, CognitiveMap, Diagnostic, Severity};

use crate::answers;
use crate::args::{Command, Global, OutputFormat, RenderFormat};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

struct Ctx {
    global: Global,
    color: bool,
}

impl Ctx {
    fn paint(&self, text: &str, ansi: &str) -> String {
        if self.color {
            format!("\x1b[{ansi}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn diagnostic(&self, d: &Diagnostic) -> String {
        let line = d.to_string();
        match d.severity {
            Severity::Error => self.paint(&line, "31"),
            Severity::Warning => self.paint(&line, "33"),
        }
    }

    fn registry_path(&self, map_file: &Path) -> PathBuf {
        self.global
            .assessments
            .clone()
            .unwrap_or_else(|| registry::default_path(map_file))
    }
}

pub fn run(global: Global, command: Command) -> Outcome {
    let color = !global.no_color && std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
    let ctx = Ctx { global, color };
    match command {
        Command::New { file, product, force } => new(&ctx, &file, product, force),
        Command::Elicit {
            file,
            resume,
            script,
            title,
        } => elicit(&ctx, &file, resume, script.as_deref(), title),
        Command::Check { file, format } => check(&ctx, &file, format),
        Command::Hypotheses {
            file,
            format,
            prioritized,
        } => hypotheses(&ctx, &file, format, prioritized),
        Command::Assess {
            file,
            hypothesis,
            status,
            risk,
            evidence,
            at,
        } => assess(&ctx, &file, &hypothesis, &status, risk.as_deref(), &evidence, at.as_deref()),
        Command::Summary { file, format, full } => summary(&ctx, &file, format, full),
        Command::Render {
            file,
            format,
            output,
            no_legend,
            product_bottom,
        } => render_map(&file, format, output.as_deref(), no_legend, product_bottom),
        Command::Serve {
            port,
            storage,
            cors_origins,
        } => serve(port, storage, cors_origins),
    }
}

// -- loading -----------------------------------------------------------------

enum LoadError {
    Io(String),
    Syntax(String),
    Semantic(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io(m) => Failure::domain(m),
            LoadError::Syntax(m) => Failure::parse(m),
            LoadError::Semantic(m) => Failure::domain(m),
        }
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()) == Some("json")
}

/// Read a `.hymap` or `.json` map. Syntax problems and semantic problems
/// found by the parser are reported separately so callers can pick the
/// right exit code.
fn try_load(path: &Path) -> Result<CognitiveMap, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(format!("{}: {e}", path.display())))?;
    if is_json(path) {
        return import_json(&text).map_err(|e| LoadError::Syntax(format!("{}: {e}", path.display())));
    }
    match dsl::parse_str(&text) {
        Ok(parsed) => {
            for w in &parsed.warnings {
                eprintln!("{}:{}: warning[{}]: {}", path.display(), w.line, w.code, w.message);
            }
            Ok(parsed.map)
        }
        Err(diags) => {
            let mut msg = String::new();
            for d in &diags {
                let _ = writeln!(msg, "{}:{d}", path.display());
            }
            let msg = msg.trim_end().to_string();
            if diags.iter().any(|d| d.stage == Stage::Syntax) {
                Err(LoadError::Syntax(msg))
            } else {
                Err(LoadError::Semantic(msg))
            }
        }
    }
}

fn load(path: &Path) -> Result<CognitiveMap, Failure> {
    try_load(path).map_err(Failure::from)
}

fn write_map(path: &Path, map: &CognitiveMap) -> Result<(), Failure> {
    let text = if is_json(path) {
        dsl::export_json(map)
    } else {
        dsl::serialize(map).text().to_string()
    };
    std::fs::write(path, text).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

fn generate(map: &CognitiveMap) -> Result<Vec<Hypothesis>, Failure> {
    hypogen::generate(map).map_err(|hypogen::HypogenError::InvalidMap(d)| invalid(&d))
}

fn invalid(diagnostics: &[Diagnostic]) -> Failure {
    let lines: Vec<String> = diagnostics.iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect();
    Failure::domain(format!("the map has validation errors:\n{}", lines.join("\n")))
}

fn load_registry(ctx: &Ctx, file: &Path, hyps: &[Hypothesis]) -> Result<Registry, Failure> {
    let path = ctx.registry_path(file);
    Registry::load(&path, hyps).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

// -- new -----------------------------------------------------------------------

fn new(ctx: &Ctx, file: &Path, product: Option<String>, force: bool) -> Outcome {
    if file.exists() && !force {
        return Err(Failure::domain(format!("{} already exists (use --force)", file.display())));
    }
    let product = match product {
        Some(p) => p,
        None if ctx.global.non_interactive => {
            return Err(Failure::usage("--product is required with --non-interactive"))
        }
        None => {
            let mut out = std::io::stdout();
            write!(out, "{} ", hymap_core::elicitation::NAMING_QUESTION).ok();
            out.flush().ok();
            let mut line = String::new();
            std::io::stdin().lock().read_line(&mut line).map_err(|e| Failure::domain(e.to_string()))?;
            line.trim().to_string()
        }
    };
    let mut map = CognitiveMap::new(product.clone());
    map.add_node(hymap_core::NodeKind::Product, &product)
        .map_err(|e| Failure::domain(e.to_string()))?;
    write_map(file, &map)?;
    println!("created {}", file.display());
    Ok(EXIT_OK)
}

// -- elicit --------------------------------------------------------------------

fn elicit(ctx: &Ctx, file: &Path, resume: bool, script: Option<&Path>, title: Option<String>) -> Outcome {
    let log_path = log::default_log_path(file);
    let mut session = if let Some(script) = script {
        let events = log::read_events(script).map_err(|e| Failure::parse(e.to_string()))?;
        let session = ElicitationSession::replay(&events).map_err(|e| Failure::domain(e.to_string()))?;
        if script != log_path {
            log::write_events(&log_path, session.log()).map_err(|e| Failure::domain(e.to_string()))?;
        }
        session
    } else if resume {
        let events = log::read_events(&log_path).map_err(|e| Failure::parse(e.to_string()))?;
        ElicitationSession::replay(&events).map_err(|e| Failure::domain(e.to_string()))?
    } else {
        if log_path.exists() {
            return Err(Failure::domain(format!(
                "{} exists; continue it with --resume",
                log_path.display()
            )));
        }
        if ctx.global.non_interactive {
            return Err(Failure::usage("elicitation needs answers; use --script with --non-interactive"));
        }
        let stem = file.file_stem().and_then(|s| s.to_str()).unwrap_or("session").to_string();
        let title = title.unwrap_or_else(|| stem.clone());
        let session = ElicitationSession::start_with(&stem, &title, DEFAULT_NODE_BUDGET, Utc::now());
        log::write_events(&log_path, session.log()).map_err(|e| Failure::domain(e.to_string()))?;
        session
    };

    if session.phase() == Phase::Done {
        return finished(file, &session, script.is_some());
    }
    if ctx.global.non_interactive {
        println!(
            "session paused in phase {}; continue with `hymap elicit {} --resume`",
            session.phase(),
            file.display()
        );
        return Ok(EXIT_OK);
    }
    interact(ctx, file, &log_path, &mut session)
}

fn finished(file: &Path, session: &ElicitationSession, replayed: bool) -> Outcome {
    write_map(file, session.map())?;
    let hyps = generate(session.map())?;
    let unsaturated = session.map().edges().iter().filter(|e| !e.saturated).count();
    let answers = session.log().len().saturating_sub(2);
    if replayed {
        println!("replayed {answers} answers");
    }
    println!("wrote {} ({} hypotheses)", file.display(), hyps.len());
    if unsaturated > 0 {
        eprintln!("warning: {unsaturated} relationship(s) were never judged saturated");
    }
    Ok(EXIT_OK)
}

fn interact(ctx: &Ctx, file: &Path, log_path: &Path, session: &mut ElicitationSession) -> Outcome {
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        let prompt = session.next_prompt().map_err(|e| Failure::domain(e.to_string()))?.clone();
        println!();
        println!("{} {}", ctx.paint(&format!("[{}]", prompt.phase), "36"), prompt.question);
        println!("  {}", ctx.paint(answers::help(&prompt), "2"));
        print!("> ");
        std::io::stdout().flush().ok();
        let Some(line) = lines.next() else {
            println!();
            println!("session saved to {}; continue with --resume", log_path.display());
            return Ok(EXIT_OK);
        };
        let line = line.map_err(|e| Failure::domain(e.to_string()))?;
        let answer = match answers::parse(&prompt, &line) {
            Ok(a) => a,
            Err(msg) => {
                println!("{}", ctx.paint(&msg, "31"));
                continue;
            }
        };
        let confirming = matches!(answer, Answer::Confirm { coherent: true });
        match session.answer(&prompt.id, answer) {
            Ok(deltas) => {
                let event = session.log().last().expect("accepted answers are logged");
                log::append_event(log_path, event).map_err(|e| Failure::domain(e.to_string()))?;
                if !deltas.is_empty() {
                    println!("  {} change(s) to the map", deltas.len());
                }
            }
            Err(e) => {
                println!("{}", ctx.paint(&e.to_string(), "31"));
                continue;
            }
        }
        if confirming {
            match session.finish() {
                Ok(_) => {
                    let event = session.log().last().expect("finish is logged");
                    log::append_event(log_path, event).map_err(|e| Failure::domain(e.to_string()))?;
                    return finished(file, session, false);
                }
                Err(e) => println!("{}", ctx.paint(&e.to_string(), "31")),
            }
        }
    }
}

// -- check ---------------------------------------------------------------------

fn check(ctx: &Ctx, file: &Path, format: OutputFormat) -> Outcome {
    let map = match try_load(file) {
        Ok(m) => m,
        Err(LoadError::Semantic(msg)) => {
            println!("{msg}");
            return Ok(EXIT_DOMAIN);
        }
        Err(e) => return Err(e.into()),
    };
    let diagnostics = map.validate();
    let report = structure_report(&map);
    match format {
        OutputFormat::Json => {
            let v = serde_json::json!({ "diagnostics": diagnostics, "report": report });
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
        OutputFormat::Csv => {
            println!("severity,code,subjects,message");
            for d in &diagnostics {
                let sev = if d.is_error() { "error" } else { "warning" };
                println!("{sev},{},{},{}", d.code, csv(&d.subjects.join(" ")), csv(&d.message));
            }
        }
        OutputFormat::Md => {
            for d in &diagnostics {
                println!("{}", ctx.diagnostic(d));
            }
            if !diagnostics.is_empty() {
                println!();
            }
            print!("{report}");
            let errors = diagnostics.iter().filter(|d| d.is_error()).count();
            let warnings = diagnostics.len() - errors;
            println!("{errors} error(s), {warnings} warning(s)");
        }
    }
    Ok(if has_errors(&diagnostics) { EXIT_DOMAIN } else { EXIT_OK })
}

fn csv(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

// -- hypotheses ------------------------------------------------------------------

fn hypotheses(ctx: &Ctx, file: &Path, format: OutputFormat, prioritized: bool) -> Outcome {
    let map = load(file)?;
    let mut hyps = generate(&map)?;
    let registry = load_registry(ctx, file, &hyps)?;
    if prioritized {
        hyps = hypogen::prioritize(&hyps, &registry);
    }
    match format {
        OutputFormat::Md => print!("{}", hypogen::to_markdown(&hyps, Some(&registry))),
        OutputFormat::Json => println!("{}", hypogen::to_json(&hyps)),
        OutputFormat::Csv => {
            println!("id,kind,statement,status,risk");
            for h in &hyps {
                let current = registry.current(&h.id);
                println!(
                    "{},{},{},{},{}",
                    h.id,
                    h.kind.as_str(),
                    csv(h.statement()),
                    current.map_or(Status::Unassessed, |a| a.status).as_str(),
                    current.and_then(|a| a.risk).map_or("", Risk::letter)
                );
            }
        }
    }
    Ok(EXIT_OK)
}

// -- assess ----------------------------------------------------------------------

fn assess(
    ctx: &Ctx,
    file: &Path,
    id: &str,
    status: &str,
    risk: Option<&str>,
    evidence: &[String],
    at: Option<&str>,
) -> Outcome {
    let status: Status = status.parse().map_err(Failure::usage)?;
    let risk: Option<Risk> = risk.map(str::parse).transpose().map_err(Failure::usage)?;
    let evidence: Vec<Evidence> = evidence
        .iter()
        .map(|e| e.parse())
        .collect::<Result<_, String>>()
        .map_err(Failure::usage)?;
    let at: DateTime<Utc> = match at {
        Some(t) => DateTime::parse_from_rfc3339(t)
            .map_err(|e| Failure::usage(format!("--at: {e}")))?
            .with_timezone(&Utc),
        None => Utc::now(),
    };
    let map = load(file)?;
    let hyps = generate(&map)?;
    let mut registry = load_registry(ctx, file, &hyps)?;
    let a = registry
        .assess_at(&hyps, &HypothesisId(id.to_string()), status, risk, evidence, at)
        .map_err(|e| Failure::domain(e.to_string()))?
        .clone();
    let path = ctx.registry_path(file);
    registry.save(&path).map_err(|e| Failure::domain(e.to_string()))?;
    println!(
        "{}: {}{}",
        a.hypothesis,
        a.status.as_str(),
        a.risk.map(|r| format!(", risk {}", r.letter())).unwrap_or_default()
    );
    Ok(EXIT_OK)
}

// -- summary ---------------------------------------------------------------------

fn summary(ctx: &Ctx, file: &Path, format: OutputFormat, full: bool) -> Outcome {
    let map = load(file)?;
    let hyps = generate(&map)?;
    let registry = load_registry(ctx, file, &hyps)?;
    let mode = if full { SummaryMode::Full } else { SummaryMode::Paper };
    let s = registry.summary(&hyps, mode);
    match format {
        OutputFormat::Md => print!("{}", s.to_markdown()),
        OutputFormat::Csv => print!("{}", s.to_csv()),
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&s).expect("serializable")),
    }
    Ok(EXIT_OK)
}

// -- render ----------------------------------------------------------------------

fn render_map(file: &Path, format: RenderFormat, output: Option<&Path>, no_legend: bool, bottom: bool) -> Outcome {
    let map = load(file)?;
    let options = RenderOptions {
        format: match format {
            RenderFormat::Dot => Format::Dot,
            RenderFormat::Svg => Format::Svg,
            RenderFormat::Layout => Format::Layout,
        },
        orientation: if bottom {
            Orientation::ProductBottom
        } else {
            Orientation::ProductTop
        },
        include_legend: !no_legend,
    };
    let text = render::render(&map, &options).map_err(|render::RenderError::InvalidMap(d)| invalid(&d))?;
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

// -- serve -----------------------------------------------------------------------

fn serve(port: u16, storage: PathBuf, cors_origins: Vec<String>) -> Outcome {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .try_init();
    let mut config = hymap_service::Config::new(storage);
    config.port = port;
    config.cors_origins = cors_origins;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::domain(e.to_string()))?;
    runtime
        .block_on(hymap_service::serve(config))
        .map_err(|e| Failure::domain(e.to_string()))?;
    Ok(EXIT_OK)
}
