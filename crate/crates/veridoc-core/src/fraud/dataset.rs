//! Reference dataset: ground-truth records parsed from comma-separated
//! text with a mandatory header row.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatasetError {
    #[error("dataset has no header row")]
    MissingHeader,
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unterminated quoted field")]
    UnterminatedQuote { line: usize },
    #[error("required column \"{0}\" is not in the dataset header")]
    UnknownColumn(String),
}

/// Rows of ground-truth records. Values are kept verbatim alongside a
/// lowercase index used by the substring checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceDataset {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    rows_lower: Vec<Vec<String>>,
}

impl ReferenceDataset {
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn value(&self, row: usize, column: usize) -> &str {
        &self.rows[row][column]
    }

    pub(crate) fn value_lower(&self, row: usize, column: usize) -> &str {
        &self.rows_lower[row][column]
    }
}

/// Parse comma-separated text. Fields may be double-quoted to protect
/// commas and quotes (`""` escapes a quote); rows may not span lines.
/// Entirely empty lines are skipped; a row with the wrong field count is an
/// error naming its 1-based line number.
pub fn parse_dataset(text: &str) -> Result<ReferenceDataset, DatasetError> {
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let fields = split_fields(line, line_no)?;
        match &columns {
            None => columns = Some(fields),
            Some(header) => {
                if fields.len() != header.len() {
                    return Err(DatasetError::RaggedRow {
                        line: line_no,
                        expected: header.len(),
                        found: fields.len(),
                    });
                }
                rows.push(fields);
            }
        }
    }
    let columns = columns.ok_or(DatasetError::MissingHeader)?;
    let rows_lower = rows
        .iter()
        .map(|row| row.iter().map(|v| v.to_lowercase()).collect())
        .collect();
    Ok(ReferenceDataset {
        columns,
        rows,
        rows_lower,
    })
}

fn split_fields(line: &str, line_no: usize) -> Result<Vec<String>, DatasetError> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut chars = line.chars().peekable();
    loop {
        match chars.peek() {
            Some('"') => {
                chars.next();
                let mut closed = false;
                while let Some(c) = chars.next() {
                    if c == '"' {
                        if chars.peek() == Some(&'"') {
                            chars.next();
                            current.push('"');
                        } else {
                            closed = true;
                            break;
                        }
                    } else {
                        current.push(c);
                    }
                }
                if !closed {
                    return Err(DatasetError::UnterminatedQuote { line: line_no });
                }
            }
            Some(',') => {
                chars.next();
                fields.push(core::mem::take(&mut current));
            }
            Some(_) => current.push(chars.next().unwrap()),
            None => break,
        }
    }
    fields.push(current);
    Ok(fields)
}

/// Serialize back to comma-separated text with canonical quoting: fields
/// containing a comma, quote, or line break are quoted, quotes doubled.
/// Ends with a trailing newline.
pub fn to_csv(ds: &ReferenceDataset) -> String {
    let mut out = String::new();
    let write_row = |row: &[String], out: &mut String| {
        for (i, field) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            if field.contains([',', '"', '\n', '\r']) {
                out.push('"');
                for c in field.chars() {
                    if c == '"' {
                        out.push('"');
                    }
                    out.push(c);
                }
                out.push('"');
            } else {
                out.push_str(field);
            }
        }
        out.push('\n');
    };
    write_row(&ds.columns, &mut out);
    for row in &ds.rows {
        write_row(row, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "Name,IP.No,Address,Date of Admission,Date of Discharge\n\
JOY,570,KURNOOL,01-07-2022,03-07-2022\n\
JOHN DOE,372758,HYDERABAD,18.07.23,23.08.23\n";

    #[test]
    fn rows_parse_verbatim() {
        let ds = parse_dataset(FIXTURE).unwrap();
        assert_eq!(ds.columns().len(), 5);
        assert_eq!(ds.row_count(), 2);
        assert_eq!(ds.value(0, 0), "JOY");
        assert_eq!(ds.value(0, 1), "570");
        assert_eq!(ds.value(0, 2), "KURNOOL");
        assert_eq!(ds.value(1, 0), "JOHN DOE");
        assert_eq!(ds.value_lower(1, 0), "john doe");
    }

    #[test]
    fn header_only_is_a_valid_empty_dataset() {
        let ds = parse_dataset("Name,IP.No\n").unwrap();
        assert_eq!(ds.row_count(), 0);
        assert_eq!(ds.column_index("IP.No"), Some(1));
    }

    #[test]
    fn missing_header_is_an_error() {
        assert_eq!(parse_dataset(""), Err(DatasetError::MissingHeader));
        assert_eq!(parse_dataset("\n\n"), Err(DatasetError::MissingHeader));
    }

    #[test]
    fn ragged_row_names_its_line() {
        let text = "A,B,C,D,E\nJOY,570,KURNOOL,01-07-2022\n";
        assert_eq!(
            parse_dataset(text),
            Err(DatasetError::RaggedRow {
                line: 2,
                expected: 5,
                found: 4
            })
        );
    }

    #[test]
    fn quoted_fields_hold_commas_and_quotes() {
        let ds = parse_dataset("Name,Address\n\"DOE, JOHN\",\"12 \"\"A\"\" ROAD\"\n").unwrap();
        assert_eq!(ds.value(0, 0), "DOE, JOHN");
        assert_eq!(ds.value(0, 1), "12 \"A\" ROAD");
    }

    #[test]
    fn unterminated_quote_is_an_error() {
        assert!(matches!(
            parse_dataset("A,B\n\"open,2\n"),
            Err(DatasetError::UnterminatedQuote { line: 2 })
        ));
    }

    #[test]
    fn trailing_blank_lines_are_ignored() {
        let ds = parse_dataset("A,B\n1,2\n\n\n").unwrap();
        assert_eq!(ds.row_count(), 1);
    }

    #[test]
    fn serialize_roundtrips_fixture_text() {
        let ds = parse_dataset(FIXTURE).unwrap();
        assert_eq!(to_csv(&ds), FIXTURE);
        // quoting is canonical both ways
        let quoted = "Name,Address\n\"DOE, JOHN\",HYDERABAD\n";
        let ds = parse_dataset(quoted).unwrap();
        assert_eq!(to_csv(&ds), quoted);
    }
}
