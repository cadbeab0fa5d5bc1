//! One search entry point that dispatches on the requested result type.

use serde::{Deserialize, Serialize};

use crate::auth::Principal;
use crate::campus::Campus;
use crate::error::{Error, Result};
use crate::model::JobPosting;
use crate::presentations::{listings, ArrangementListing};
use crate::recruitment::{open_postings, JobFilter};
use crate::store::Tables;

pub const KEYWORD_MAX: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct SearchQuery {
    #[serde(rename = "type")]
    pub search_type: String,
    #[serde(default)]
    pub keyword: String,
    #[serde(default)]
    pub city: Option<String>,
}

impl SearchQuery {
    pub fn new(search_type: &str, keyword: &str) -> Self {
        SearchQuery {
            search_type: search_type.to_string(),
            keyword: keyword.to_string(),
            city: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "results")]
pub enum SearchResults {
    Recruit(Vec<JobPosting>),
    Application(Vec<ArrangementListing>),
}

impl SearchResults {
    pub fn len(&self) -> usize {
        match self {
            SearchResults::Recruit(v) => v.len(),
            SearchResults::Application(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub struct Search<'a> {
    campus: &'a Campus,
}

impl<'a> Search<'a> {
    pub(crate) fn new(campus: &'a Campus) -> Self {
        Search { campus }
    }

    /// `Recruit` matches open postings on place, city, detail or company name;
    /// `Application` matches arrangements on theme, place or company name.
    /// Matching is a case-insensitive substring test, and an empty keyword matches everything.
    pub fn search(&self, _viewer: &Principal, query: &SearchQuery) -> Result<SearchResults> {
        if query.keyword.chars().count() > KEYWORD_MAX {
            return Err(Error::validation(
                "keyword",
                format!("at most {KEYWORD_MAX} characters"),
            ));
        }
        let tables = self.campus.store().snapshot();
        let needle = fold(&query.keyword);
        match query.search_type.as_str() {
            "Recruit" => {
                let filter = JobFilter {
                    city: query.city.clone(),
                    ..Default::default()
                };
                let hits = open_postings(&tables, &filter, self.campus.clock().now())?
                    .into_iter()
                    .filter(|p| {
                        let company = company_name(&tables, &p.company_id);
                        [p.place.as_str(), &p.city, &p.detail, company]
                            .iter()
                            .any(|f| fold(f).contains(&needle))
                    })
                    .collect();
                Ok(SearchResults::Recruit(hits))
            }
            "Application" => Ok(SearchResults::Application(
                listings(&tables)
                    .into_iter()
                    .filter(|l| {
                        [l.arrangement.theme.as_str(), &l.arrangement.place, &l.company_name]
                            .iter()
                            .any(|f| fold(f).contains(&needle))
                    })
                    .collect(),
            )),
            other => Err(Error::Input(format!("unknown search type {other:?}"))),
        }
    }
}

fn company_name<'t>(tables: &'t Tables, company_id: &str) -> &'t str {
    tables
        .companies
        .get(&company_id.into())
        .map(|c| c.company_name.as_str())
        .unwrap_or("")
}

/// Case fold that agrees with itself after upper-casing the input.
pub fn fold(s: &str) -> String {
    s.to_uppercase().to_lowercase()
}
