use serde_json::Value;

use crate::CliError;

/// Line-delimited JSON records, with an optional flat numeric table for `--csv`.
pub struct Output {
    records: Vec<Value>,
    table: Option<Table>,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Table {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|x| x.to_string()).collect());
    }
}

impl Output {
    pub fn records(records: Vec<Value>) -> Output {
        Output { records, table: None }
    }

    pub fn with_table(mut self, table: Table) -> Output {
        self.table = Some(table);
        self
    }

    pub fn render(&self, csv: bool) -> Result<String, CliError> {
        let mut out = String::new();
        if csv {
            let table = self
                .table
                .as_ref()
                .ok_or_else(|| CliError::usage("--csv is not available for this command"))?;
            out.push_str(&table.header.join(","));
            out.push('\n');
            for row in &table.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        } else {
            for r in &self.records {
                out.push_str(&r.to_string());
                out.push('\n');
            }
        }
        Ok(out)
    }
}
