//! Operation scripts: the on-disk YAML format and its in-memory form.
//!
//! A script is a YAML sequence of flat mappings, one mapping per operation,
//! replayed in file order against a market:
//!
//! ```yaml
//! - op: deposit
//!   user: 0
//!   amount: 100
//! - op: assign
//!   item: 0
//!   user: 0
//! - op: price
//!   item: 0
//!   amount: 30
//! - op: sell
//!   item: 0
//!   buyer: 0
//! ```
//!
//! Parsing happens in two layers: a syntactic pass that reads the YAML
//! subset above (block sequences of flat mappings, non-negative integer
//! scalars, comments) into raw key/value entries, and a semantic pass that
//! instantiates [`Operation`] values and enforces the per-operation field
//! schema. Both passes are total: every input either yields a document or
//! one specific diagnostic. Scripts are machine-generated, so unknown or
//! duplicate keys are rejected rather than ignored.
//!
//! [`serialize_script`] emits one canonical byte form — LF line endings,
//! two-space indentation, fields in a fixed order — so that equal documents
//! produce identical files.

use thiserror::Error;

use crate::market::Money;
use crate::nat::Nat;

/// One script command. Fields are non-negative integers throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Deposit { user: Nat, amount: Money },
    Assign { item: Nat, user: Nat },
    Price { item: Nat, amount: Money },
    Sell { item: Nat, buyer: Nat },
}

/// A parsed script: operations in exactly the order they appear in the file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScriptDocument {
    pub operations: Vec<Operation>,
}

impl ScriptDocument {
    pub fn new(operations: Vec<Operation>) -> Self {
        ScriptDocument { operations }
    }

    pub fn len(&self) -> usize {
        self.operations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operations.is_empty()
    }
}

impl From<Vec<Operation>> for ScriptDocument {
    fn from(operations: Vec<Operation>) -> Self {
        ScriptDocument { operations }
    }
}

/// Why a script text was rejected. Syntactic problems point at a line;
/// semantic problems point at an operation index (and field).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("operation {index}: unknown operation `{tag}`")]
    UnknownOperation { index: usize, tag: String },
    #[error("operation {index}: missing field `{field}`")]
    MissingField { index: usize, field: &'static str },
    #[error("operation {index}: unexpected field `{field}`")]
    ExtraField { index: usize, field: String },
    #[error("operation {index}: field `{field}` is not a non-negative integer")]
    NonIntegerField { index: usize, field: String },
    #[error("operation {index}: field `{field}` is negative")]
    NegativeField { index: usize, field: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

struct RawPair {
    key: String,
    value: String,
}

type RawEntry = Vec<RawPair>;

// A comment runs from a `#` at the start of the content or after whitespace
// to the end of the line.
fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && (i == 0 || bytes[i - 1] == b' ' || bytes[i - 1] == b'\t') {
            return &line[..i];
        }
    }
    line
}

fn split_pair(content: &str, line: usize) -> Result<RawPair, ParseError> {
    let colon = content
        .find(':')
        .ok_or_else(|| syntax(line, "expected `key: value`"))?;
    let key = content[..colon].trim();
    let value = content[colon + 1..].trim();
    if key.is_empty() {
        return Err(syntax(line, "empty key before `:`"));
    }
    if key.chars().any(char::is_whitespace) {
        return Err(syntax(line, format!("malformed key `{key}`")));
    }
    Ok(RawPair {
        key: key.to_string(),
        value: value.to_string(),
    })
}

// Syntactic layer: the YAML subset -> ordered raw entries.
fn scan_entries(text: &str) -> Result<Vec<RawEntry>, ParseError> {
    let mut entries: Vec<RawEntry> = Vec::new();
    let mut saw_empty_list = false;
    let mut saw_doc_start = false;

    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw_line).trim_end();
        let content = line.trim_start();
        if content.is_empty() {
            continue;
        }
        let indent = &line[..line.len() - content.len()];
        if indent.contains('\t') {
            return Err(syntax(line_no, "tab character in indentation"));
        }
        if saw_empty_list {
            return Err(syntax(line_no, "content after `[]`"));
        }

        if indent.is_empty() {
            match content {
                "---" => {
                    if entries.is_empty() && !saw_doc_start {
                        saw_doc_start = true;
                    } else {
                        return Err(syntax(line_no, "unexpected document marker"));
                    }
                }
                "[]" => {
                    if entries.is_empty() {
                        saw_empty_list = true;
                    } else {
                        return Err(syntax(line_no, "unexpected `[]` after sequence entries"));
                    }
                }
                "-" => {
                    return Err(syntax(line_no, "expected `key: value` after `-`"));
                }
                _ if content.starts_with("- ") => {
                    let pair = split_pair(&content[2..], line_no)?;
                    entries.push(vec![pair]);
                }
                _ => {
                    return Err(syntax(line_no, "expected a sequence entry starting with `- `"));
                }
            }
        } else {
            if content.starts_with('-') {
                return Err(syntax(line_no, "nested sequences are not supported"));
            }
            let pair = split_pair(content, line_no)?;
            match entries.last_mut() {
                Some(entry) => entry.push(pair),
                None => {
                    return Err(syntax(line_no, "indented line outside any sequence entry"));
                }
            }
        }
    }
    Ok(entries)
}

const DEPOSIT_FIELDS: [&str; 2] = ["user", "amount"];
const ASSIGN_FIELDS: [&str; 2] = ["item", "user"];
const PRICE_FIELDS: [&str; 2] = ["item", "amount"];
const SELL_FIELDS: [&str; 2] = ["item", "buyer"];

fn parse_value(index: usize, field: &str, value: &str) -> Result<Nat, ParseError> {
    let negative = value.len() > 1
        && value.starts_with('-')
        && value[1..].bytes().all(|b| b.is_ascii_digit());
    if negative {
        return Err(ParseError::NegativeField {
            index,
            field: field.to_string(),
        });
    }
    if value.is_empty() || !value.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::NonIntegerField {
            index,
            field: field.to_string(),
        });
    }
    // all-digit values beyond the 64-bit range are likewise not valid Nats
    value.parse::<Nat>().map_err(|_| ParseError::NonIntegerField {
        index,
        field: field.to_string(),
    })
}

// Semantic layer: raw entries -> operations, enforcing the per-tag schema.
fn instantiate(index: usize, entry: RawEntry) -> Result<Operation, ParseError> {
    let tag = entry
        .iter()
        .find(|pair| pair.key == "op")
        .map(|pair| pair.value.clone())
        .ok_or(ParseError::MissingField { index, field: "op" })?;

    let expected: &[&str; 2] = match tag.as_str() {
        "deposit" => &DEPOSIT_FIELDS,
        "assign" => &ASSIGN_FIELDS,
        "price" => &PRICE_FIELDS,
        "sell" => &SELL_FIELDS,
        _ => return Err(ParseError::UnknownOperation { index, tag }),
    };

    // Collect fields in file order, normalizing the accepted `user` alias
    // for sell's `buyer`; anything outside the schema (or repeated) is an
    // extra field.
    let mut seen_op = false;
    let mut values: [Option<Nat>; 2] = [None, None];
    for pair in &entry {
        if pair.key == "op" {
            if seen_op {
                return Err(ParseError::ExtraField {
                    index,
                    field: "op".to_string(),
                });
            }
            seen_op = true;
            continue;
        }
        let canonical = if tag == "sell" && pair.key == "user" {
            "buyer"
        } else {
            pair.key.as_str()
        };
        let slot = match expected.iter().position(|f| *f == canonical) {
            Some(slot) => slot,
            None => {
                return Err(ParseError::ExtraField {
                    index,
                    field: pair.key.clone(),
                })
            }
        };
        if values[slot].is_some() {
            return Err(ParseError::ExtraField {
                index,
                field: pair.key.clone(),
            });
        }
        values[slot] = Some(parse_value(index, &pair.key, &pair.value)?);
    }

    let mut resolved = [0; 2];
    for (slot, field) in expected.iter().enumerate() {
        resolved[slot] = values[slot].ok_or(ParseError::MissingField { index, field })?;
    }

    Ok(match tag.as_str() {
        "deposit" => Operation::Deposit { user: resolved[0], amount: resolved[1] },
        "assign" => Operation::Assign { item: resolved[0], user: resolved[1] },
        "price" => Operation::Price { item: resolved[0], amount: resolved[1] },
        _ => Operation::Sell { item: resolved[0], buyer: resolved[1] },
    })
}

/// Parse a script text into its operation list.
pub fn parse_script(text: &str) -> Result<ScriptDocument, ParseError> {
    let entries = scan_entries(text)?;
    let operations = entries
        .into_iter()
        .enumerate()
        .map(|(index, entry)| instantiate(index, entry))
        .collect::<Result<Vec<Operation>, ParseError>>()?;
    Ok(ScriptDocument { operations })
}

/// Emit the canonical byte form: LF endings, two-space indentation, fields
/// in a fixed per-operation order, one trailing LF. `parse_script` inverts
/// this exactly.
pub fn serialize_script(doc: &ScriptDocument) -> String {
    use std::fmt::Write;

    if doc.operations.is_empty() {
        return "[]\n".to_string();
    }
    let mut out = String::new();
    for op in &doc.operations {
        match *op {
            Operation::Deposit { user, amount } => {
                write!(out, "- op: deposit\n  user: {user}\n  amount: {amount}\n")
            }
            Operation::Assign { item, user } => {
                write!(out, "- op: assign\n  item: {item}\n  user: {user}\n")
            }
            Operation::Price { item, amount } => {
                write!(out, "- op: price\n  item: {item}\n  amount: {amount}\n")
            }
            Operation::Sell { item, buyer } => {
                write!(out, "- op: sell\n  item: {item}\n  buyer: {buyer}\n")
            }
        }
        .expect("writing to a String cannot fail");
    }
    out
}
