from sockopt.blob.local_fs import (
    LocalFS,
    TableError,
    atomic_write_text,
    read_csv_table,
    read_table_text,
    render_csv,
    sha256_file,
    typed_column,
)

__all__ = [
    "LocalFS",
    "TableError",
    "atomic_write_text",
    "read_csv_table",
    "read_table_text",
    "render_csv",
    "sha256_file",
    "typed_column",
]
