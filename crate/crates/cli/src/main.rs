mod args;
mod commands;

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use args::{Cli, Command, Output};
use commands::{execute, resume_point, save_cursor, NotNice, Outcome, EXIT_NOT_NICE};

/// One persisted run: enough to re-execute it and compare.
#[derive(Serialize, Deserialize, Debug)]
struct ResultRecord {
    command: String,
    inputs: Value,
    outputs: Value,
    timings: Value,
    version: String,
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Expand(_) => "expand",
        Command::Construct(_) => "construct",
        Command::Verify(_) => "verify",
        Command::Search(_) => "search",
        Command::Replay(_) => "replay",
    }
}

/// The arguments with file side effects removed, and the effective start
/// index pinned for searches.
fn canonical_argv(raw: &[String], start: Option<u128>) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = raw.iter();
    while let Some(a) = it.next() {
        let flag = a.split('=').next().unwrap_or(a);
        if matches!(flag, "--out-file" | "--cursor" | "--start") {
            if !a.contains('=') {
                it.next();
            }
            continue;
        }
        out.push(a.clone());
    }
    if let Some(s) = start {
        out.push("--start".into());
        out.push(s.to_string());
    }
    out
}

fn run(cli: &Cli, start: Option<u128>) -> (Outcome, Option<String>) {
    match execute(&cli.command, &cli.config, start) {
        Ok(o) => (o, None),
        Err(e) => {
            let code = if e.is::<NotNice>() { EXIT_NOT_NICE } else { 1 };
            let msg = format!("{e:#}");
            let o = Outcome {
                rows: vec![json!({ "error": msg })],
                text: String::new(),
                code,
                cursor: None,
            };
            (o, Some(msg))
        }
    }
}

fn outputs(o: &Outcome) -> Value {
    json!({ "exit_code": o.code, "rows": o.rows })
}

fn append_record(path: &Path, rec: &ResultRecord) -> anyhow::Result<()> {
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    writeln!(f, "{}", serde_json::to_string(rec)?)?;
    Ok(())
}

fn replay(path: &Path) -> anyhow::Result<i32> {
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut mismatches = 0;
    let mut total = 0;
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ResultRecord =
            serde_json::from_str(&line).with_context(|| format!("record {}", i + 1))?;
        let argv: Vec<String> = serde_json::from_value(rec.inputs["argv"].clone())?;
        let cli =
            Cli::try_parse_from(std::iter::once("padicf".to_string()).chain(argv.iter().cloned()))?;
        let (o, _) = run(&cli, None);
        total += 1;
        if outputs(&o) == rec.outputs {
            println!("same  {}", argv.join(" "));
        } else {
            mismatches += 1;
            println!("DIFF  {}", argv.join(" "));
        }
    }
    println!("{total} records replayed, {mismatches} differ");
    Ok(i32::from(mismatches > 0))
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&raw) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Command::Replay(r) = &cli.command {
        return match replay(&r.file) {
            Ok(code) => ExitCode::from(code as u8),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        };
    }

    let start = match &cli.command {
        Command::Search(a) => match resume_point(a, &cli.config) {
            Ok(s) => Some(s.unwrap_or(a.start)),
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
        },
        _ => None,
    };
    let t0 = Instant::now();
    let (outcome, err) = run(&cli, start);
    let elapsed = t0.elapsed();

    match cli.config.output {
        Output::Text => print!("{}", outcome.text),
        Output::Json if err.is_none() => {
            for row in &outcome.rows {
                println!("{row}");
            }
        }
        Output::Json => {}
    }
    if let Some(msg) = &err {
        eprintln!("error: {msg}");
    }

    let mut code = outcome.code;
    if let (Command::Search(a), Some(c)) = (&cli.command, outcome.cursor) {
        if let Err(e) = save_cursor(a, &cli.config, c) {
            eprintln!("error: {e:#}");
            code = 1;
        }
    }
    if let Some(path) = &cli.config.out_file {
        let rec = ResultRecord {
            command: command_name(&cli.command).into(),
            inputs: json!({ "argv": canonical_argv(&raw[1..], start) }),
            outputs: outputs(&outcome),
            timings: json!({ "elapsed_ms": elapsed.as_secs_f64() * 1e3 }),
            version: env!("CARGO_PKG_VERSION").into(),
        };
        if let Err(e) = append_record(path, &rec) {
            eprintln!("error: {e:#}");
            code = 1;
        }
    }
    ExitCode::from(code as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn argv_drops_side_effects() {
        let raw = v(&[
            "search",
            "--p",
            "5",
            "--cursor",
            "c.json",
            "--out-file=r.jsonl",
            "--start",
            "3",
            "--t",
            "1",
        ]);
        assert_eq!(
            canonical_argv(&raw, Some(7)),
            v(&["search", "--p", "5", "--t", "1", "--start", "7"])
        );
        assert_eq!(
            canonical_argv(&v(&["expand", "--p", "5"]), None),
            v(&["expand", "--p", "5"])
        );
    }

    #[test]
    fn h_ranges() {
        assert_eq!(commands::parse_h_range("0..2").unwrap(), vec![0, 1, 2]);
        assert_eq!(commands::parse_h_range("4").unwrap(), vec![4]);
        assert!(commands::parse_h_range("3..1").is_err());
    }
}
