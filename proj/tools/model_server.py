# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The xabsa Authors

"""Serves Hugging Face sequence classifiers over the small JSON protocol used
by xabsa's HTTP classifier.

    GET  /models/<id>   -> {"model_id", "revision", "labels", "mask_token", "max_input_units"}
    POST /classify      {"model", "inputs": [{"text", "text_pair"?}]}
                        -> {"outputs": [[{"label", "score"}, ...], ...]}

Usage:
    python3 tools/model_server.py --port 8765 \
        --model nlptown/bert-base-multilingual-uncased-sentiment \
        --model yangheng/deberta-v3-base-absa-v1.1
    XABSA_MODEL_ENDPOINT=http://127.0.0.1:8765 xabsa run-all ...
"""

import argparse
import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer


class Served:
    def __init__(self, model_id, revision):
        self.tokenizer = AutoTokenizer.from_pretrained(model_id, revision=revision)
        self.model = AutoModelForSequenceClassification.from_pretrained(
            model_id, revision=revision)
        self.model.eval()
        self.model_id = model_id
        self.revision = revision or getattr(self.model.config, "_commit_hash", None) or "main"
        n = self.model.config.num_labels
        self.labels = [self.model.config.id2label[i] for i in range(n)]
        self.lock = threading.Lock()

    def info(self):
        max_len = self.tokenizer.model_max_length
        if max_len is None or max_len > 100000:
            max_len = 512
        return {
            "model_id": self.model_id,
            "revision": self.revision,
            "labels": self.labels,
            "mask_token": self.tokenizer.mask_token,
            "max_input_units": max_len,
        }

    def classify(self, inputs):
        texts = [i["text"] for i in inputs]
        pairs = [i.get("text_pair") for i in inputs]
        kwargs = dict(padding=True, truncation=True, return_tensors="pt")
        with self.lock, torch.no_grad():
            if any(p is not None for p in pairs):
                enc = self.tokenizer(texts, [p or "" for p in pairs], **kwargs)
            else:
                enc = self.tokenizer(texts, **kwargs)
            probs = torch.softmax(self.model(**enc).logits, dim=-1).tolist()
        return [
            sorted(({"label": l, "score": s} for l, s in zip(self.labels, row)),
                   key=lambda e: -e["score"])
            for row in probs
        ]


def make_handler(models):
    class Handler(BaseHTTPRequestHandler):
        def _send(self, status, body):
            data = json.dumps(body).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_GET(self):
            if not self.path.startswith("/models/"):
                return self._send(404, {"error": "not found"})
            served = models.get(self.path[len("/models/"):])
            if served is None:
                return self._send(404, {"error": "unknown model"})
            self._send(200, served.info())

        def do_POST(self):
            if self.path != "/classify":
                return self._send(404, {"error": "not found"})
            length = int(self.headers.get("Content-Length", 0))
            try:
                req = json.loads(self.rfile.read(length))
                served = models[req["model"]]
                self._send(200, {"outputs": served.classify(req["inputs"])})
            except KeyError as e:
                self._send(400, {"error": f"missing {e}"})
            except (ValueError, TypeError) as e:
                self._send(400, {"error": str(e)})

        def log_message(self, fmt, *args):
            logging.debug(fmt, *args)

    return Handler


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8765)
    ap.add_argument("--model", action="append", required=True,
                    help="model id, optionally id@revision; repeatable")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)

    models = {}
    for spec in args.model:
        model_id, _, revision = spec.partition("@")
        logging.info("loading %s", spec)
        models[model_id] = Served(model_id, revision or None)
    server = ThreadingHTTPServer((args.host, args.port), make_handler(models))
    logging.info("listening on http://%s:%d", args.host, args.port)
    server.serve_forever()


if __name__ == "__main__":
    main()
