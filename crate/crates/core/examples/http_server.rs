//! Runs the HTTP API on a local port and drives it with a few raw requests.
//!
//! `cargo run --example http_server -- --hold` keeps it running for manual use.

use std::sync::Arc;

use campus_recruit::auth::HashCost;
use campus_recruit::store::Fixture;
use campus_recruit::{api, Campus};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::{TcpListener, TcpStream};

async fn request(addr: std::net::SocketAddr, method: &str, path: &str, token: Option<&str>, body: &str) -> String {
    let mut stream = TcpStream::connect(addr).await.expect("connect");
    let auth = token
        .map(|t| format!("Authorization: Bearer {t}\r\n"))
        .unwrap_or_default();
    let raw = format!(
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n{auth}Content-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(raw.as_bytes()).await.expect("write");
    let mut out = String::new();
    stream.read_to_string(&mut out).await.expect("read");
    out
}

fn status_and_body(response: &str) -> (&str, &str) {
    let status = response.lines().next().unwrap_or_default();
    let body = response.split("\r\n\r\n").nth(1).unwrap_or_default();
    (status, body)
}

#[tokio::main]
async fn main() {
    let hold = std::env::args().any(|a| a == "--hold");
    let campus = Arc::new(
        Campus::builder()
            .hash_cost(HashCost::fast())
            .fixture(Fixture::canonical())
            .build(),
    );
    let listener = TcpListener::bind("127.0.0.1:0").await.expect("bind");
    let addr = listener.local_addr().unwrap();
    println!("listening on http://{addr}");
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(api::serve(listener, campus, async {
        let _ = stopped.await;
    }));

    let login = request(
        addr,
        "POST",
        "/api/login",
        None,
        r#"{"role":"Student","id":"S1","password":"S1-pass"}"#,
    )
    .await;
    let (status, body) = status_and_body(&login);
    println!("login: {status}");
    let token = serde_json::from_str::<serde_json::Value>(body).unwrap()["token"]
        .as_str()
        .unwrap()
        .to_string();

    for (method, path) in [
        ("GET", "/api/jobs?city=Shanghai"),
        ("GET", "/api/arrangements"),
        ("POST", "/api/arrangements/1/register"),
        ("GET", "/api/students"),
    ] {
        let resp = request(addr, method, path, Some(&token), "").await;
        let (status, body) = status_and_body(&resp);
        let preview: String = body.chars().take(100).collect();
        println!("{method} {path}: {status}\n  {preview}");
    }

    if hold {
        println!("fixture logins use <id>-pass, e.g. S1 / S1-pass; Ctrl-C to stop");
        let _ = tokio::signal::ctrl_c().await;
    }
    let _ = stop.send(());
    server.await.unwrap().unwrap();
}
