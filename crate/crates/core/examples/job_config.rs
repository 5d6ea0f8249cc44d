use tame_iwasawa::cli::{run_text, validate_rank_report, Command};

const JOB: &str = r#"{
  "schema_version": 1,
  "p": 5,
  "f": 1,
  "S": [7, 11],
  "lambda": { "mode": "table", "table": { "all": 0 } }
}"#;

fn main() {
    let out = run_text(JOB, &Command::Rank { assume_greenberg: false, lambda_table: None });
    let report = out.report.expect("rank report");
    print!("{report}");
    validate_rank_report(&serde_json::from_str(&report).unwrap()).expect("report is consistent");
    println!("exit code {}", out.code);

    let bad = run_text(r#"{"p": 3, "S": [3, 7]}"#, &Command::Chars);
    println!("exit code {}: {}", bad.code, bad.diagnostic.unwrap());
}
