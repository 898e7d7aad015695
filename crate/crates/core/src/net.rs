//! Line-oriented TCP front end for an [`Oracle`].
//!
//! ```text
//! HELLO          -> MODE <kp|cp> SIZE <H> <W>
//! ENC <hex>      -> CT <hex>
//! SAMPLE         -> PT <hex> CT <hex>
//! COUNT          -> QUERIES <n>
//! anything else  -> ERR <reason>
//! ```

use crate::attacks::{AttackModel, Oracle};
use crate::image::Image;
use crate::{Error, Result};
use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};

/// Answers one request line. Never fails; problems become `ERR` replies.
pub fn handle_line<O: Oracle + ?Sized>(oracle: &mut O, line: &str) -> String {
    let mut parts = line.split_whitespace();
    let reply = match (parts.next(), parts.next(), parts.next()) {
        (Some("HELLO"), None, _) => {
            let (h, w) = oracle.dims();
            Ok(format!("MODE {} SIZE {h} {w}", oracle.model()))
        }
        (Some("COUNT"), None, _) => Ok(format!("QUERIES {}", oracle.query_count())),
        (Some("SAMPLE"), None, _) => oracle
            .sample()
            .map(|(p, c)| format!("PT {} CT {}", hex::encode(p.pixels()), hex::encode(c.pixels()))),
        (Some("ENC"), Some(payload), None) => {
            let (h, w) = oracle.dims();
            decode_image(payload, h, w).and_then(|p| oracle.encrypt(&p)).map(|c| format!("CT {}", hex::encode(c.pixels())))
        }
        (None, ..) => Err(Error::Protocol("empty request".into())),
        (Some(cmd), ..) => Err(Error::Protocol(format!("malformed request {cmd:?}"))),
    };
    reply.unwrap_or_else(|e| format!("ERR {}", e.to_string().replace('\n', " ")))
}

fn decode_image(payload: &str, height: usize, width: usize) -> Result<Image> {
    let bytes = hex::decode(payload).map_err(|e| Error::Protocol(format!("bad hex: {e}")))?;
    Image::new(height, width, bytes)
}

/// Serves requests on one connection until the peer hangs up.
pub fn serve_connection<O: Oracle + ?Sized>(stream: TcpStream, oracle: &mut O) -> Result<()> {
    stream.set_nodelay(true)?;
    let mut writer = stream.try_clone()?;
    for line in BufReader::new(stream).lines() {
        let mut reply = handle_line(oracle, line?.trim_end());
        reply.push('\n');
        writer.write_all(reply.as_bytes())?;
    }
    Ok(())
}

/// Accepts connections one at a time. Stops after `max_connections` if given.
pub fn serve<O: Oracle + ?Sized>(listener: &TcpListener, oracle: &mut O, max_connections: Option<usize>) -> Result<()> {
    let mut served = 0;
    for stream in listener.incoming() {
        // a dropped client should not take the server down
        let _ = serve_connection(stream?, oracle);
        served += 1;
        if max_connections.is_some_and(|m| served >= m) {
            break;
        }
    }
    Ok(())
}

/// Client side: an [`Oracle`] backed by a remote server.
pub struct TcpOracle {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
    model: AttackModel,
    height: usize,
    width: usize,
    queries: u64,
}

impl TcpOracle {
    pub fn connect(addr: impl ToSocketAddrs) -> Result<Self> {
        let writer = TcpStream::connect(addr)?;
        writer.set_nodelay(true)?;
        let reader = BufReader::new(writer.try_clone()?);
        let mut o = TcpOracle { reader, writer, model: AttackModel::ChosenPlaintext, height: 0, width: 0, queries: 0 };
        let hello = o.request("HELLO")?;
        match hello.split_whitespace().collect::<Vec<_>>()[..] {
            ["MODE", model, "SIZE", h, w] => {
                o.model = model.parse()?;
                o.height = h.parse().map_err(|_| Error::Protocol(format!("bad height in {hello:?}")))?;
                o.width = w.parse().map_err(|_| Error::Protocol(format!("bad width in {hello:?}")))?;
            }
            _ => return Err(Error::Protocol(format!("unexpected greeting {hello:?}"))),
        }
        Ok(o)
    }

    fn request(&mut self, line: &str) -> Result<String> {
        self.writer.write_all(format!("{line}\n").as_bytes())?;
        let mut reply = String::new();
        if self.reader.read_line(&mut reply)? == 0 {
            return Err(Error::Protocol("connection closed by server".into()));
        }
        let reply = reply.trim_end().to_string();
        match reply.strip_prefix("ERR ") {
            Some(reason) => Err(Error::OracleRefused(reason.to_string())),
            None => Ok(reply),
        }
    }

    /// Query count as reported by the server.
    pub fn remote_count(&mut self) -> Result<u64> {
        let r = self.request("COUNT")?;
        r.strip_prefix("QUERIES ")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::Protocol(format!("unexpected reply {r:?}")))
    }
}

impl Oracle for TcpOracle {
    fn model(&self) -> AttackModel {
        self.model
    }

    fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    fn encrypt(&mut self, plain: &Image) -> Result<Image> {
        let r = self.request(&format!("ENC {}", hex::encode(plain.pixels())))?;
        let ct = r.strip_prefix("CT ").ok_or_else(|| Error::Protocol(format!("unexpected reply {r:?}")))?;
        let c = decode_image(ct, self.height, self.width)?;
        self.queries += 1;
        Ok(c)
    }

    fn sample(&mut self) -> Result<(Image, Image)> {
        let r = self.request("SAMPLE")?;
        let pair = match r.split_whitespace().collect::<Vec<_>>()[..] {
            ["PT", p, "CT", c] => (decode_image(p, self.height, self.width)?, decode_image(c, self.height, self.width)?),
            _ => return Err(Error::Protocol(format!("unexpected reply {r:?}"))),
        };
        self.queries += 1;
        Ok(pair)
    }

    fn query_count(&self) -> u64 {
        self.queries
    }
}
