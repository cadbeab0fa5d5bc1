use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::entity::{project, Entity};
use super::error::StoreError;
use super::tables::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    /// Case-sensitive substring match on text fields.
    Contains,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub field: String,
    pub op: Op,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderBy {
    pub field: String,
    pub descending: bool,
}

/// A conjunction of field predicates with explicit ordering and paging.
///
/// Results are ordered by `order` and then by primary key ascending.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub filter: Vec<Predicate>,
    pub order: Vec<OrderBy>,
    pub offset: usize,
    pub limit: Option<usize>,
}

impl Query {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn filter(mut self, field: &str, op: Op, value: impl Into<Value>) -> Self {
        self.filter.push(Predicate {
            field: field.to_string(),
            op,
            value: value.into(),
        });
        self
    }

    pub fn eq(self, field: &str, value: impl Into<Value>) -> Self {
        self.filter(field, Op::Eq, value)
    }

    pub fn order_by(mut self, field: &str) -> Self {
        self.order.push(OrderBy {
            field: field.to_string(),
            descending: false,
        });
        self
    }

    pub fn order_by_desc(mut self, field: &str) -> Self {
        self.order.push(OrderBy {
            field: field.to_string(),
            descending: true,
        });
        self
    }

    pub fn page(mut self, offset: usize, limit: usize) -> Self {
        self.offset = offset;
        self.limit = Some(limit);
        self
    }

    fn check_fields<T: Entity>(&self) -> Result<(), StoreError> {
        let known = |f: &str| T::FIELDS.contains(&f);
        let unknown = self
            .filter
            .iter()
            .map(|p| p.field.as_str())
            .chain(self.order.iter().map(|o| o.field.as_str()))
            .find(|f| !known(f));
        match unknown {
            Some(f) => Err(StoreError::Query(format!("{} has no field {f:?}", T::KIND))),
            None => Ok(()),
        }
    }

    pub(crate) fn run<T: Entity>(&self, table: &Table<T>) -> Result<Vec<T>, StoreError> {
        self.check_fields::<T>()?;
        if self.limit == Some(0) {
            return Ok(Vec::new());
        }
        let mut hits: Vec<(std::collections::BTreeMap<String, Value>, &T)> = table
            .rows()
            .map(|row| (project(row), row))
            .filter(|(fields, _)| {
                self.filter
                    .iter()
                    .all(|p| matches(fields.get(&p.field).unwrap_or(&Value::Null), p.op, &p.value))
            })
            .collect();
        if !self.order.is_empty() {
            // Stable sort keeps primary-key order among ties.
            hits.sort_by(|(a, _), (b, _)| {
                for o in &self.order {
                    let null = Value::Null;
                    let ord = compare_values(a.get(&o.field).unwrap_or(&null), b.get(&o.field).unwrap_or(&null));
                    let ord = if o.descending { ord.reverse() } else { ord };
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            });
        }
        Ok(hits
            .into_iter()
            .skip(self.offset)
            .take(self.limit.unwrap_or(usize::MAX))
            .map(|(_, row)| row.clone())
            .collect())
    }
}

fn type_rank(v: &Value) -> u8 {
    match v {
        Value::Null => 0,
        Value::Bool(_) => 1,
        Value::Number(_) => 2,
        Value::String(_) => 3,
        Value::Array(_) => 4,
        Value::Object(_) => 5,
    }
}

/// Total order over JSON scalars: null < bool < number < text; numbers numerically, text bytewise.
pub fn compare_values(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Bool(x), Value::Bool(y)) => x.cmp(y),
        (Value::Number(x), Value::Number(y)) => match (x.as_i64(), y.as_i64()) {
            (Some(x), Some(y)) => x.cmp(&y),
            _ => {
                let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
                x.partial_cmp(&y).unwrap_or(Ordering::Equal)
            }
        },
        (Value::String(x), Value::String(y)) => x.cmp(y),
        _ => type_rank(a).cmp(&type_rank(b)),
    }
}

fn matches(field: &Value, op: Op, value: &Value) -> bool {
    let same_type = type_rank(field) == type_rank(value);
    match op {
        Op::Contains => match (field, value) {
            (Value::String(hay), Value::String(needle)) => hay.contains(needle.as_str()),
            _ => false,
        },
        Op::Eq => same_type && compare_values(field, value) == Ordering::Equal,
        Op::Ne => !(same_type && compare_values(field, value) == Ordering::Equal),
        Op::Lt => same_type && compare_values(field, value) == Ordering::Less,
        Op::Le => same_type && compare_values(field, value) != Ordering::Greater,
        Op::Gt => same_type && compare_values(field, value) == Ordering::Greater,
        Op::Ge => same_type && compare_values(field, value) != Ordering::Less,
    }
}
