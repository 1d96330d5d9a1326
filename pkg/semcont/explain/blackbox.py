"""
External classifier adapter.

Runs a command as a child process and talks line-delimited JSON over its
stdin/stdout. Each image becomes one ClassifyRequest; the child answers with
one ClassifyResponse per line, in order. The adapter is a ConfidenceFn, so it
plugs into rise, lime and kernelshap.
"""

import base64
import logging
import shlex
import subprocess
import threading

import numpy as np
from pydantic import ValidationError

from semcont.errors import DataError, NumericError
from semcont.schemas.blackbox import ClassifyRequest, ClassifyResponse

logger = logging.getLogger(__name__)

# requests written before their answers are read; keeps both pipes below capacity
MAX_IN_FLIGHT = 8


class SubprocessClassifier:
    """
    Black-box model served by a child process.

    Usage:
        with SubprocessClassifier("python my_model.py") as model_fn:
            saliency = rise(model_fn, image)
    """

    def __init__(self, command: str | list[str]):
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self._process: subprocess.Popen | None = None
        self._lock = threading.Lock()
        self._next_id = 0

    def start(self) -> "SubprocessClassifier":
        if self._process is None:
            logger.info("starting external classifier: %s", " ".join(self.command))
            try:
                self._process = subprocess.Popen(
                    self.command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    text=True,
                    bufsize=1,
                )
            except OSError as exc:
                raise DataError(f"cannot start external classifier {self.command[0]!r}: {exc}") from exc
        return self

    def close(self) -> None:
        if self._process is None:
            return
        if self._process.stdin:
            try:
                self._process.stdin.close()
            except OSError:
                pass
        try:
            self._process.wait(timeout=10)
        except subprocess.TimeoutExpired:
            self._process.kill()
        self._process = None

    def __enter__(self) -> "SubprocessClassifier":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _request(self, image: np.ndarray) -> ClassifyRequest:
        pixels = np.ascontiguousarray(image, dtype="<f4")
        request = ClassifyRequest(
            id=self._next_id,
            pixels_f32_b64=base64.b64encode(pixels.tobytes()).decode("ascii"),
            w=pixels.shape[1],
            h=pixels.shape[0],
        )
        self._next_id += 1
        return request

    def _read_response(self, expected_id: int) -> float:
        line = self._process.stdout.readline()
        if not line:
            raise DataError("external classifier closed its output")
        try:
            response = ClassifyResponse.model_validate_json(line)
        except ValidationError as exc:
            raise DataError(f"malformed classifier response: {exc}") from exc
        if response.id != expected_id:
            raise DataError(f"classifier answered request {response.id}, expected {expected_id}")
        if not np.isfinite(response.confidence):
            raise NumericError(f"classifier returned non-finite confidence for request {expected_id}")
        return response.confidence

    def __call__(self, images: np.ndarray) -> np.ndarray:
        images = np.asarray(images)
        if images.ndim == 2:
            images = images[None]
        with self._lock:
            self.start()
            confidences = []
            for start in range(0, len(images), MAX_IN_FLIGHT):
                requests = [self._request(image) for image in images[start : start + MAX_IN_FLIGHT]]
                try:
                    for request in requests:
                        self._process.stdin.write(request.model_dump_json() + "\n")
                    self._process.stdin.flush()
                except OSError as exc:
                    raise DataError(f"external classifier closed its input: {exc}") from exc
                confidences += [self._read_response(r.id) for r in requests]
            return np.array(confidences, dtype=np.float64)
