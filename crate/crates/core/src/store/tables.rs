use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::*;

use super::entity::{Entity, Key, Kind, Ref};

/// Rows of one kind ordered by primary key.
#[derive(Debug, Clone, PartialEq)]
pub struct Table<T> {
    rows: BTreeMap<Key, T>,
}

impl<T> Default for Table<T> {
    fn default() -> Self {
        Table { rows: BTreeMap::new() }
    }
}

impl<T: Entity> Table<T> {
    pub fn get(&self, key: &Key) -> Option<&T> {
        self.rows.get(key)
    }

    pub fn contains(&self, key: &Key) -> bool {
        self.rows.contains_key(key)
    }

    /// Rows in primary-key order.
    pub fn rows(&self) -> impl Iterator<Item = &T> {
        self.rows.values()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub(crate) fn put(&mut self, row: T) {
        self.rows.insert(row.key(), row);
    }

    pub(crate) fn take(&mut self, key: &Key) -> Option<T> {
        self.rows.remove(key)
    }

    pub(crate) fn max_int_key(&self) -> i64 {
        self.rows
            .keys()
            .filter_map(|k| match k {
                Key::Int(n) => Some(*n),
                Key::Text(_) => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// The whole relational state: one table per entity kind plus id sequences.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tables {
    pub colleges: Table<College>,
    pub majors: Table<Major>,
    pub class_groups: Table<ClassGroup>,
    pub education_levels: Table<EducationLevel>,
    pub industries: Table<Industry>,
    pub administrators: Table<Administrator>,
    pub students: Table<Student>,
    pub companies: Table<Company>,
    pub company_reviews: Table<CompanyReview>,
    pub job_postings: Table<JobPosting>,
    pub resume_applications: Table<ResumeApplication>,
    pub presentation_applications: Table<PresentationApplication>,
    pub arrangements: Table<Arrangement>,
    pub registrations: Table<Registration>,
    pub notifications: Table<Notification>,
    pub(crate) sequences: BTreeMap<Kind, i64>,
}

/// Applies `$body` to each table, binding it as `$t`.
macro_rules! for_each_table {
    ($tables:expr, |$t:ident| $body:expr) => {{
        {
            let $t = &$tables.colleges;
            $body
        }
        {
            let $t = &$tables.majors;
            $body
        }
        {
            let $t = &$tables.class_groups;
            $body
        }
        {
            let $t = &$tables.education_levels;
            $body
        }
        {
            let $t = &$tables.industries;
            $body
        }
        {
            let $t = &$tables.administrators;
            $body
        }
        {
            let $t = &$tables.students;
            $body
        }
        {
            let $t = &$tables.companies;
            $body
        }
        {
            let $t = &$tables.company_reviews;
            $body
        }
        {
            let $t = &$tables.job_postings;
            $body
        }
        {
            let $t = &$tables.resume_applications;
            $body
        }
        {
            let $t = &$tables.presentation_applications;
            $body
        }
        {
            let $t = &$tables.arrangements;
            $body
        }
        {
            let $t = &$tables.registrations;
            $body
        }
        {
            let $t = &$tables.notifications;
            $body
        }
    }};
}

pub(crate) use for_each_table;

impl Tables {
    pub fn row_count(&self, kind: Kind) -> usize {
        match kind {
            Kind::College => self.colleges.len(),
            Kind::Major => self.majors.len(),
            Kind::ClassGroup => self.class_groups.len(),
            Kind::EducationLevel => self.education_levels.len(),
            Kind::Industry => self.industries.len(),
            Kind::Administrator => self.administrators.len(),
            Kind::Student => self.students.len(),
            Kind::Company => self.companies.len(),
            Kind::CompanyReview => self.company_reviews.len(),
            Kind::JobPosting => self.job_postings.len(),
            Kind::ResumeApplication => self.resume_applications.len(),
            Kind::PresentationApplication => self.presentation_applications.len(),
            Kind::Arrangement => self.arrangements.len(),
            Kind::Registration => self.registrations.len(),
            Kind::Notification => self.notifications.len(),
        }
    }

    pub fn exists(&self, kind: Kind, key: &Key) -> bool {
        match kind {
            Kind::College => self.colleges.contains(key),
            Kind::Major => self.majors.contains(key),
            Kind::ClassGroup => self.class_groups.contains(key),
            Kind::EducationLevel => self.education_levels.contains(key),
            Kind::Industry => self.industries.contains(key),
            Kind::Administrator => self.administrators.contains(key),
            Kind::Student => self.students.contains(key),
            Kind::Company => self.companies.contains(key),
            Kind::CompanyReview => self.company_reviews.contains(key),
            Kind::JobPosting => self.job_postings.contains(key),
            Kind::ResumeApplication => self.resume_applications.contains(key),
            Kind::PresentationApplication => self.presentation_applications.contains(key),
            Kind::Arrangement => self.arrangements.contains(key),
            Kind::Registration => self.registrations.contains(key),
            Kind::Notification => self.notifications.contains(key),
        }
    }

    /// Every row holding a foreign reference to `(kind, key)`, grouped by referencing kind.
    pub fn dependents_of(&self, kind: Kind, key: &Key) -> BTreeMap<Kind, Vec<Key>> {
        let mut found: BTreeMap<Kind, Vec<Key>> = BTreeMap::new();
        for_each_table!(self, |table| {
            for row in table.rows() {
                if row.references().iter().any(|r| r.kind == kind && &r.key == key) {
                    found.entry(entity_kind(row)).or_default().push(row.key());
                }
            }
        });
        found
    }

    /// All `(referencing kind, reference)` pairs whose target row is missing.
    pub fn dangling_references(&self) -> Vec<(Kind, Key, Ref)> {
        let mut out = Vec::new();
        for_each_table!(self, |table| {
            for row in table.rows() {
                for r in row.references() {
                    if !self.exists(r.kind, &r.key) {
                        out.push((entity_kind(row), row.key(), r));
                    }
                }
            }
        });
        out
    }
}

fn entity_kind<T: Entity>(_row: &T) -> Kind {
    T::KIND
}

impl AcademicDirectory for Tables {
    fn college(&self, college_id: &str) -> Option<&College> {
        self.colleges.get(&Key::from(college_id))
    }

    fn major(&self, major_id: &str) -> Option<&Major> {
        self.majors.get(&Key::from(major_id))
    }

    fn class_group(&self, class_id: &str) -> Option<&ClassGroup> {
        self.class_groups.get(&Key::from(class_id))
    }
}

/// Seed document: one array per entity kind, rows in the snake_case wire form.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    #[serde(default)]
    pub colleges: Vec<College>,
    #[serde(default)]
    pub majors: Vec<Major>,
    #[serde(default)]
    pub class_groups: Vec<ClassGroup>,
    #[serde(default)]
    pub education_levels: Vec<EducationLevel>,
    #[serde(default)]
    pub industries: Vec<Industry>,
    #[serde(default)]
    pub administrators: Vec<Administrator>,
    #[serde(default)]
    pub students: Vec<Student>,
    #[serde(default)]
    pub companies: Vec<Company>,
    #[serde(default)]
    pub company_reviews: Vec<CompanyReview>,
    #[serde(default)]
    pub job_postings: Vec<JobPosting>,
    #[serde(default)]
    pub resume_applications: Vec<ResumeApplication>,
    #[serde(default)]
    pub presentation_applications: Vec<PresentationApplication>,
    #[serde(default)]
    pub arrangements: Vec<Arrangement>,
    #[serde(default)]
    pub registrations: Vec<Registration>,
    #[serde(default)]
    pub notifications: Vec<Notification>,
}

const CANONICAL_FIXTURE: &str = include_str!("../../fixtures/seed.json");

impl Fixture {
    /// The desk-scale demo data set shipped with the crate.
    pub fn canonical() -> Fixture {
        serde_json::from_str(CANONICAL_FIXTURE).expect("bundled fixture is valid JSON")
    }

    pub fn from_json(text: &str) -> Result<Fixture, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes")
    }

    pub(crate) fn from_tables(t: &Tables) -> Fixture {
        fn all<T: Entity>(table: &Table<T>) -> Vec<T> {
            table.rows().cloned().collect()
        }
        Fixture {
            colleges: all(&t.colleges),
            majors: all(&t.majors),
            class_groups: all(&t.class_groups),
            education_levels: all(&t.education_levels),
            industries: all(&t.industries),
            administrators: all(&t.administrators),
            students: all(&t.students),
            companies: all(&t.companies),
            company_reviews: all(&t.company_reviews),
            job_postings: all(&t.job_postings),
            resume_applications: all(&t.resume_applications),
            presentation_applications: all(&t.presentation_applications),
            arrangements: all(&t.arrangements),
            registrations: all(&t.registrations),
            notifications: all(&t.notifications),
        }
    }
}
