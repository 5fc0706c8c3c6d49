use zonefit::data::validate_file;
use zonefit::CsvSchema;

use crate::commands::read_json;
use crate::error::{CliError, Result};
use crate::ValidateArgs;

/// Prints one line per violation and a summary; violations exit with the
/// input-error code.
pub fn run(a: &ValidateArgs) -> Result<()> {
    let schema: CsvSchema = match &a.schema.schema {
        Some(p) => read_json(p)?,
        None => CsvSchema::default(),
    };
    let report = validate_file(&a.input, &schema)
        .map_err(|e| CliError::from(e).context(a.input.display()))?;
    for v in &report.violations {
        println!("{v}");
    }
    println!(
        "{}: {} rows read, {} valid, {} violations",
        a.input.display(),
        report.rows_read,
        report.dataset.row_count(),
        report.violations.len()
    );
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "{} rows failed validation",
            report.violations.len()
        )))
    }
}
