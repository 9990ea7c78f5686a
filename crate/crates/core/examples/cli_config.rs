//! Running an experiment from a JSON config and writing CSV and summary files,
//! as the `pbits` binary does.

use pbits::experiments::{read_csv, run_and_write, ExperimentConfig};

fn main() -> pbits::Result<()> {
    let dir = std::env::temp_dir().join("pbits-example");
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("entropy.csv");
    let json = format!(
        r#"{{"experiment": "entropy-asymptotics", "dims": [4, 16], "samples": 10, "seed": 42,
            "output_path": {:?}, "json_summary": {:?}, "no_timestamp": true}}"#,
        csv,
        dir.join("entropy.json")
    );
    let cfg = ExperimentConfig::from_json(&json)?;
    let out = run_and_write(&cfg)?;
    let records = read_csv(std::io::BufReader::new(std::fs::File::open(&csv)?))?;
    println!("wrote {} rows to {}", records.len(), csv.display());
    println!("{}", out.summary_json()?);
    Ok(())
}
