# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Downloads the UCI Adult, Bank Marketing and Diabetes 130-US files and
writes comma-delimited copies with header rows that faircluster can read.

Usage: python3 tools/fetch_datasets.py OUTPUT_DIR
"""

import csv
import io
import pathlib
import sys
import urllib.request
import zipfile

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]


def fetch(url):
  with urllib.request.urlopen(url) as response:
    return response.read()


def write_rows(path, header, rows):
  with open(path, "w", newline="") as out:
    writer = csv.writer(out)
    writer.writerow(header)
    writer.writerows(rows)


def adult(out_dir):
  text = fetch(f"{UCI}/adult/adult.data").decode()
  rows = [[cell.strip() for cell in row]
          for row in csv.reader(io.StringIO(text)) if len(row) == 15]
  write_rows(out_dir / "adult.csv", ADULT_COLUMNS, rows)


def member(archive_bytes, name):
  with zipfile.ZipFile(io.BytesIO(archive_bytes)) as archive:
    for info in archive.infolist():
      if info.filename.endswith(name):
        return archive.read(info).decode()
  raise SystemExit(f"{name} not found in archive")


def bank(out_dir):
  text = member(fetch(f"{UCI}/00222/bank.zip"), "bank-full.csv")
  rows = list(csv.reader(io.StringIO(text), delimiter=";"))
  write_rows(out_dir / "bank.csv", rows[0], rows[1:])


def diabetes(out_dir):
  text = member(fetch(f"{UCI}/00296/dataset_diabetes.zip"), "diabetic_data.csv")
  (out_dir / "diabetes.csv").write_text(text)


def main():
  if len(sys.argv) != 2:
    raise SystemExit(__doc__)
  out_dir = pathlib.Path(sys.argv[1])
  out_dir.mkdir(parents=True, exist_ok=True)
  for step in (adult, bank, diabetes):
    step(out_dir)
    print(f"{step.__name__}: done")


if __name__ == "__main__":
  main()
