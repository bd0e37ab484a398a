//! Structure, sequence and energy-model ingestion.

use std::fs;
use std::io::Read;
use std::path::Path;

use rrfold_core::dotbracket::parse_structure;
use rrfold_core::Diagram;
use rrfold_fold::{sequence_pair, EnergyModel, SequencePair};

use crate::error::{CliError, Result};

/// A named sequence pair taken from flags or consecutive FASTA records.
pub struct Job {
    pub name: Option<String>,
    pub pair: SequencePair,
}

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Extended dot-bracket, or a JSON diagram when the text starts with `{`.
pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let text = text.trim();
    if text.starts_with('{') {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("diagram JSON: {e}")))
    } else {
        Ok(parse_structure(text)?)
    }
}

pub fn parse_fasta(text: &str) -> Result<Vec<(String, String)>> {
    let mut records: Vec<(String, String)> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('>') {
            records.push((name.trim().to_string(), String::new()));
        } else if let Some((_, seq)) = records.last_mut() {
            seq.push_str(&line.to_ascii_uppercase());
        } else {
            return Err(CliError::Input(format!("FASTA line {}: sequence before the first header", k + 1)));
        }
    }
    Ok(records)
}

/// Pairs consecutive FASTA records as `(R, S)`.
pub fn fasta_jobs(text: &str) -> Result<Vec<Job>> {
    let records = parse_fasta(text)?;
    if records.is_empty() || records.len() % 2 != 0 {
        return Err(CliError::Input(format!(
            "FASTA needs two records per pair, found {}",
            records.len()
        )));
    }
    let single = records.len() == 2;
    records
        .chunks(2)
        .map(|c| {
            Ok(Job {
                name: (!single).then(|| format!("{}&{}", c[0].0, c[1].0)),
                pair: sequence_pair(&c[0].1, &c[1].1)?,
            })
        })
        .collect()
}

pub fn load_model(path: Option<&Path>) -> Result<EnergyModel> {
    match path {
        Some(p) => Ok(EnergyModel::from_toml(&read_text(p)?)?),
        None => Ok(EnergyModel::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fasta_pairs() {
        let jobs = fasta_jobs(">r\nGG\nA\n>s\nuuc\n").unwrap();
        assert_eq!(jobs.len(), 1);
        assert_eq!(jobs[0].pair.r_str(), "GGA");
        assert_eq!(jobs[0].pair.s_str(), "UUC");
        assert!(jobs[0].name.is_none());
        assert_eq!(fasta_jobs(">a\nG\n>b\nC\n>c\nA\n>d\nU\n").unwrap()[1].name.as_deref(), Some("c&d"));
        assert!(fasta_jobs(">a\nG\n").is_err());
        assert!(fasta_jobs("GG\n").is_err());
    }

    #[test]
    fn diagrams_from_both_syntaxes() {
        let a = parse_diagram("([&)]").unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(parse_diagram(&json).unwrap(), a);
        assert!(parse_diagram("((").is_err());
    }
}
