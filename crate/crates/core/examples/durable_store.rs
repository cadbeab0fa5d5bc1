//! A file-backed store survives a restart, and its export matches what was seeded.

use campus_recruit::model::College;
use campus_recruit::store::{Fixture, Store, StoreConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("campus-recruit-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("store.json");

    println!("migrate: {:?}", Store::migrate(&path)?);
    {
        let store = Store::open(&StoreConfig::file(&path))?;
        store.seed(&Fixture::canonical())?;
        store.write(|tx| {
            tx.insert(College {
                college_id: "COL3".into(),
                college_name: "Law".into(),
            })
        })?;
    }

    let reopened = Store::open(&StoreConfig::file(&path))?;
    let colleges: Vec<String> = reopened.all::<College>().into_iter().map(|c| c.college_name).collect();
    println!("colleges after reopen: {colleges:?}");
    println!("integrity issues: {}", reopened.integrity_issues().len());

    // A failed transaction leaves nothing behind.
    let dup = reopened.write(|tx| {
        tx.insert(College {
            college_id: "COL4".into(),
            college_name: "Medicine".into(),
        })?;
        tx.insert(College {
            college_id: "COL4".into(),
            college_name: "Again".into(),
        })
    });
    println!("duplicate insert: {}", dup.unwrap_err());
    println!("COL4 present: {}", reopened.find::<College>("COL4").is_some());

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
