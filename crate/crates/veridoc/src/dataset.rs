//! Reference dataset loading.

use std::fs;
use std::path::Path;

use veridoc_core::fraud::{parse_dataset, ReferenceDataset};

use crate::{Error, Result};

/// Load a comma-separated dataset with a header row, e.g.
/// `Name,IP.No,Address,Date of Admission,Date of Discharge`.
pub fn load_dataset(path: &Path) -> Result<ReferenceDataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(&text).map_err(Into::into)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_and_indexes_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        fs::write(
            &path,
            "Name,IP.No,Address,Date of Admission,Date of Discharge\n\
             JOY,570,KURNOOL,01-07-2022,03-07-2022\n",
        )
        .unwrap();
        let ds = load_dataset(&path).unwrap();
        assert_eq!(ds.row_count(), 1);
        assert_eq!(ds.value(0, 2), "KURNOOL");
    }

    #[test]
    fn missing_file_reports_the_path() {
        let err = load_dataset(Path::new("/nonexistent/data.csv")).unwrap_err();
        assert!(err.to_string().contains("data.csv"));
    }
}
