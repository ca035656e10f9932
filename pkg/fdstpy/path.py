"""Canonical paths with checked reads and atomic writes."""

import os
from tempfile import mkstemp
from typing import Final

from fdstpy.types import type_error


class Path(str):
    """
    An absolute, normalized path.

    Environment variables and `~` are expanded and symbolic links resolved
    when the object is created, so equal files have equal paths.

    >>> Path("/tmp/../tmp/x") == Path("/tmp/x")
    True
    """

    def __new__(cls, value):
        """
        Canonicalize a path string.

        :param value: the path
        :raises TypeError: if `value` is not a string
        :raises ValueError: if `value` is empty
        """
        if not isinstance(value, str):
            raise type_error(value, "path", str)
        if len(value) <= 0:
            raise ValueError("Path must not be empty.")
        canonical: Final[str] = os.path.normcase(os.path.abspath(
            os.path.realpath(os.path.expanduser(os.path.expandvars(value)))))
        return super().__new__(cls, canonical)

    def enforce_file(self) -> None:
        """
        Require that this path is an existing file.

        :raises ValueError: if it is not
        """
        if not os.path.isfile(self):
            raise ValueError(f"'{self}' is not a file.")

    def enforce_dir(self) -> None:
        """
        Require that this path is an existing directory.

        :raises ValueError: if it is not
        """
        if not os.path.isdir(self):
            raise ValueError(f"'{self}' is not a directory.")

    def ensure_dir_exists(self) -> None:
        """Create this directory and its parents if needed."""
        try:
            os.makedirs(self, exist_ok=True)
        except OSError as err:
            raise ValueError(f"Cannot create directory '{self}'.") from err
        self.enforce_dir()

    def resolve_inside(self, relative_path: str) -> "Path":
        """
        Get a path below this directory.

        :param relative_path: the relative path
        :returns: the canonical child path
        :raises ValueError: if the result would lie outside this directory
        """
        if not isinstance(relative_path, str):
            raise type_error(relative_path, "relative_path", str)
        if (len(relative_path) <= 0) \
                or (relative_path.strip() != relative_path):
            raise ValueError(f"Invalid relative path '{relative_path}'.")
        child: Final[Path] = Path(os.path.join(self, relative_path))
        if os.path.commonpath([self, child]) != self:
            raise ValueError(f"'{child}' is not inside '{self}'.")
        return child

    def read_bytes(self) -> bytes:
        """
        Read this file.

        :returns: its contents
        """
        self.enforce_file()
        with open(self, "rb") as reader:
            return reader.read()

    def write_bytes_atomic(self, data: bytes) -> None:
        """
        Replace this file with new contents.

        The data is written to a temporary file next to the target, which
        is then renamed, so readers see either the old or the new file.

        :param data: the contents
        """
        if not isinstance(data, bytes | bytearray):
            raise type_error(data, "data", bytes)
        parent: Final[Path] = Path(os.path.dirname(self))
        parent.ensure_dir_exists()
        handle, temp = mkstemp(dir=parent, prefix=".tmp-")
        try:
            with os.fdopen(handle, "wb") as writer:
                writer.write(data)
            os.replace(temp, self)
        except BaseException:
            if os.path.exists(temp):
                os.remove(temp)
            raise

    def write_text_atomic(self, text: str) -> None:
        """
        Replace this file with non-empty UTF-8 text.

        :param text: the text
        """
        if not isinstance(text, str):
            raise type_error(text, "text", str)
        if len(text) <= 0:
            raise ValueError("Refusing to write empty text.")
        self.write_bytes_atomic(text.encode("utf-8"))
