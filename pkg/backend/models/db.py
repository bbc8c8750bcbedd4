from datetime import datetime, timezone
from pathlib import Path
from typing import Optional
import sqlite3
import logging

from backend.settings import settings

# Polynomial cache lives under the configured cache directory
DB_PATH = Path(settings.cache_dir) / "macsel.db"
SCHEMA_VERSION = "1"
logging.basicConfig(level=logging.INFO)


def resolve_path(cache_dir: Optional[Path] = None) -> Path:
    return Path(cache_dir) / "macsel.db" if cache_dir is not None else DB_PATH


def get_conn(cache_dir: Optional[Path] = None):
    path = resolve_path(cache_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    conn = sqlite3.connect(path, timeout=30)
    conn.row_factory = sqlite3.Row
    return conn


def _create_polynomials(curr):
    curr.execute("""
        CREATE TABLE IF NOT EXISTS polynomials (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            family TEXT NOT NULL,
            partition TEXT NOT NULL,
            n INTEGER,
            indeterminates TEXT,
            payload TEXT NOT NULL,
            created_at TEXT,
            UNIQUE (family, partition)
        )
    """)


def init_db(cache_dir: Optional[Path] = None):
    conn = get_conn(cache_dir)
    curr = conn.cursor()

    # Key/value header
    curr.execute("""
        CREATE TABLE IF NOT EXISTS cache_meta (
            key TEXT PRIMARY KEY,
            value TEXT
        )
    """)
    _create_polynomials(curr)

    # --- VERSION CHECK: a different schema invalidates every stored polynomial ---
    row = curr.execute("SELECT value FROM cache_meta WHERE key = 'schema_version'").fetchone()
    if row is None:
        curr.execute("INSERT INTO cache_meta (key, value) VALUES ('schema_version', ?)", (SCHEMA_VERSION,))
    elif row["value"] != SCHEMA_VERSION:
        logging.warning("Cache schema %s != %s, dropping stored polynomials.", row["value"], SCHEMA_VERSION)
        curr.execute("DROP TABLE IF EXISTS polynomials")
        _create_polynomials(curr)
        curr.execute("UPDATE cache_meta SET value = ? WHERE key = 'schema_version'", (SCHEMA_VERSION,))

    # --- MIGRATION: caches written before indeterminates were tracked ---
    curr.execute("PRAGMA table_info(polynomials)")
    columns = [r[1] for r in curr.fetchall()]
    if "indeterminates" not in columns:
        try:
            curr.execute("ALTER TABLE polynomials ADD COLUMN indeterminates TEXT")
            logging.info("Migrated: Added 'indeterminates' column to polynomials.")
        except Exception as e:
            logging.warning(f"Could not ALTER TABLE for 'indeterminates': {e}")

    curr.execute(
        "INSERT OR REPLACE INTO cache_meta (key, value) VALUES ('opened_at', ?)",
        (datetime.now(timezone.utc).isoformat(),),
    )
    conn.commit()
    conn.close()


if __name__ == "__main__":
    init_db()
    print(f"Polynomial cache ready at {DB_PATH}")
