use std::path::Path;

use crate::error::CliError;

/// Formats a value with 17 significant digits; `None` becomes an empty field.
pub fn number(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

/// Comma-separated, LF-terminated, header first.
pub fn csv_bytes(header: &[&str], rows: &[Vec<Option<f64>>]) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer
            .write_record(row.iter().map(|v| number(*v)))
            .expect("in-memory write");
    }
    writer.into_inner().expect("in-memory flush")
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(number(Some(1.0 / 3.0)), "3.3333333333333331e-1");
        assert_eq!(number(Some(0.0)), "0.0000000000000000e0");
        assert_eq!(number(None), "");
    }

    #[test]
    fn layout() {
        let bytes = csv_bytes(&["a", "b"], &[vec![Some(1.0), None]]);
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "a,b\n1.0000000000000000e0,\n"
        );
    }
}
