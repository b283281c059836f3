#pragma once

#include <filesystem>
#include <vector>

#include "apollo/email.hpp"

namespace apollo {

// Evaluation dataset CSV, UTF-8, header row
//   id,body,sender,receiver,date,subject,urls,label
// with `urls` holding a JSON array of strings and `label` one of
// phishing|legit. Standard CSV quoting throughout.
//
// load_dataset throws SchemaError (with the 1-based data row) on a missing
// or reordered column, a bad id or label, or an undecodable urls cell, and
// IoError when the file cannot be read. Ids come from the id column and
// must be unique; files produced by this project number rows 0..n-1.
std::vector<DatasetEmail> load_dataset(const std::filesystem::path& path);

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetEmail>& emails);

// Parsers for a single CSV record, exposed for reuse by the tests.
std::vector<std::string> parse_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

} // namespace apollo
