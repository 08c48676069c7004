//! CSV readers and writers whose open errors carry the path.

use std::fs::File;
use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Reader::from_reader(f))
}

pub(crate) fn csv_writer(path: &Path, headers: bool) -> Result<csv::Writer<File>> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .has_headers(headers)
        .from_writer(f))
}
