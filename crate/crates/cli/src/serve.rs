use std::net::{SocketAddr, TcpListener};
use std::path::{Path, PathBuf};

use tiny_http::{Header, Method, Response, Server};

use crate::output::{Exit, Failure};

const WORKERS: usize = 4;

/// A routed response: status, content type, body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl Reply {
    fn not_found() -> Self {
        Self {
            status: 404,
            content_type: "text/plain; charset=utf-8",
            body: b"not found\n".to_vec(),
        }
    }
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()).unwrap_or("") {
        "json" => "application/json",
        "svg" => "image/svg+xml",
        "html" => "text/html; charset=utf-8",
        "js" | "mjs" => "text/javascript",
        "css" => "text/css",
        "pdb" | "txt" => "text/plain; charset=utf-8",
        "png" => "image/png",
        "wasm" => "application/wasm",
        _ => "application/octet-stream",
    }
}

/// A single path segment that cannot escape its directory.
fn safe_name(name: &str) -> Option<&str> {
    let ok = !name.is_empty() && name != "." && name != ".." && !name.contains(['/', '\\']);
    ok.then_some(name)
}

fn file(path: PathBuf) -> Reply {
    match std::fs::read(&path) {
        Ok(body) if path.is_file() => Reply {
            status: 200,
            content_type: content_type(&path),
            body,
        },
        _ => Reply::not_found(),
    }
}

/// Accessions with a scene document in `out`, sorted.
pub fn list_scenes(out: &Path) -> Vec<String> {
    let mut accessions: Vec<String> = std::fs::read_dir(out)
        .into_iter()
        .flatten()
        .flatten()
        .filter_map(|e| e.file_name().to_str()?.strip_suffix(".scene.json").map(str::to_string))
        .collect();
    accessions.sort();
    accessions
}

/// Maps a GET path to a reply. Read-only; never touches anything outside
/// `out` and `ui`.
pub fn route(path: &str, out: &Path, ui: Option<&Path>) -> Reply {
    let path = path.split(['?', '#']).next().unwrap_or("");
    let segments: Vec<&str> = path.trim_start_matches('/').split('/').collect();
    match segments.as_slice() {
        ["api", "scenes"] => {
            let body = serde_json::to_vec(&list_scenes(out)).expect("string list serializes");
            Reply {
                status: 200,
                content_type: "application/json",
                body,
            }
        }
        ["api", kind, acc] => {
            let suffix = match *kind {
                "scenes" => "scene.json",
                "coloring" => "coloring.json",
                "structures" => "pdb",
                _ => return Reply::not_found(),
            };
            match safe_name(acc) {
                Some(acc) => file(out.join(format!("{acc}.{suffix}"))),
                None => Reply::not_found(),
            }
        }
        ["files", name] => match safe_name(name) {
            Some(name) => file(out.join(name)),
            None => Reply::not_found(),
        },
        ["api", ..] | ["files", ..] => Reply::not_found(),
        rest => {
            let Some(ui) = ui else {
                return Reply::not_found();
            };
            let mut target = ui.to_path_buf();
            for seg in rest.iter().filter(|s| !s.is_empty()) {
                match safe_name(seg) {
                    Some(seg) => target.push(seg),
                    None => return Reply::not_found(),
                }
            }
            if target.is_dir() {
                target.push("index.html");
            }
            file(target)
        }
    }
}

/// Binds `addr`; a busy port maps to exit code 5.
pub fn bind(addr: SocketAddr) -> Result<TcpListener, Failure> {
    TcpListener::bind(addr).map_err(|e| {
        let exit = if e.kind() == std::io::ErrorKind::AddrInUse {
            Exit::PortBusy
        } else {
            Exit::Io
        };
        Failure {
            exit,
            message: format!("cannot listen on {addr}: {e}"),
        }
    })
}

/// Serves until the process is terminated.
pub fn serve(listener: TcpListener, out: &Path, ui: Option<&Path>) -> Result<(), Failure> {
    let local = listener.local_addr().map_err(|e| Failure::io(e.to_string()))?;
    let server = Server::from_listener(listener, None).map_err(|e| Failure::io(e.to_string()))?;
    eprintln!("listening on http://{local}/");
    std::thread::scope(|s| {
        for _ in 0..WORKERS {
            s.spawn(|| loop {
                let Ok(request) = server.recv() else {
                    continue;
                };
                let reply = match request.method() {
                    Method::Get | Method::Head => route(request.url(), out, ui),
                    _ => Reply {
                        status: 405,
                        content_type: "text/plain; charset=utf-8",
                        body: b"read-only\n".to_vec(),
                    },
                };
                let header = Header::from_bytes("Content-Type", reply.content_type).expect("static header");
                let response = Response::from_data(reply.body)
                    .with_status_code(reply.status)
                    .with_header(header);
                if let Err(e) = request.respond(response) {
                    eprintln!("warning: response failed: {e}");
                }
            });
        }
    });
    Ok(())
}
