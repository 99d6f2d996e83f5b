use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::commands::CliError;

/// Read one complex sample per line as `re,im`. Blank lines and `#` comments are skipped.
pub fn read_samples(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(CliError::Input(format!(
                "{}:{line}: expected `re,im`, found {} fields",
                path.display(),
                record.len()
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::Input(format!("{}:{line}: `{s}` is not a number", path.display())))
        };
        values.push(Complex64::new(parse(&record[0])?, parse(&record[1])?));
    }
    Ok(values)
}

pub fn samples_to_csv(values: &[Complex64]) -> String {
    values.iter().map(|z| format!("{:e},{:e}\n", z.re, z.im)).collect()
}

/// Write to `out`, or stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(mpencil::Error::from)?;
            }
            fs::write(path, text).map_err(mpencil::Error::from)?;
        }
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(mpencil::Error::from)?;
        }
    }
    Ok(())
}
