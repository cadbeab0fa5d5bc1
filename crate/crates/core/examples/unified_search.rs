//! One search box over job postings and presentation arrangements.

use campus_recruit::auth::{HashCost, Principal, Role};
use campus_recruit::search::{SearchQuery, SearchResults};
use campus_recruit::store::Fixture;
use campus_recruit::Campus;

fn main() {
    let campus = Campus::builder()
        .hash_cost(HashCost::fast())
        .fixture(Fixture::canonical())
        .build();
    let viewer = Principal::new(Role::Student, "S1");
    let search = campus.search();

    let queries = [
        SearchQuery::new("Recruit", "shanghai"),
        SearchQuery::new("Recruit", "HARBOR"),
        SearchQuery::new("Application", "finance"),
        SearchQuery::new("Banana", "x"),
    ];
    for q in &queries {
        match search.search(&viewer, q) {
            Ok(SearchResults::Recruit(rows)) => {
                let ids: Vec<_> = rows.iter().map(|p| p.recruit_id.as_str()).collect();
                println!("{} {:?} → postings {ids:?}", q.search_type, q.keyword);
            }
            Ok(SearchResults::Application(rows)) => {
                let themes: Vec<_> = rows.iter().map(|a| a.arrangement.theme.as_str()).collect();
                println!("{} {:?} → events {themes:?}", q.search_type, q.keyword);
            }
            Err(e) => println!("{} {:?} → {}", q.search_type, q.keyword, e.code().as_str()),
        }
    }
}
