#include "apollo/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "apollo/errors.hpp"

namespace apollo {

namespace {

constexpr std::string_view kHeader = "id,body,sender,receiver,date,subject,urls,label";

// Reads one CSV record (possibly spanning lines when quoted) from `in`.
// Returns false on EOF with nothing read.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        const char ch = char(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(std::move(field));
            return true;
        } else {
            field += ch;
        }
    }
    if (!any) return false;
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(std::move(field));
    return true;
}

std::vector<std::string> decode_urls_cell(const std::string& cell, long row) {
    if (cell.empty()) throw SchemaError(row, "urls cell is empty, expected a JSON array");
    nlohmann::json parsed = nlohmann::json::parse(cell, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_array())
        throw SchemaError(row, "urls cell is not a JSON array: " + cell);
    std::vector<std::string> urls;
    for (const auto& item : parsed) {
        if (!item.is_string()) throw SchemaError(row, "urls cell contains a non-string element");
        urls.push_back(item.get<std::string>());
    }
    return urls;
}

} // namespace

std::vector<std::string> parse_csv_line(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::vector<std::string> fields;
    read_record(in, fields);
    return fields;
}

std::string csv_escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<DatasetEmail> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset: " + path.string());

    std::vector<std::string> fields;
    if (!read_record(in, fields)) throw SchemaError(0, "empty file, expected a header row");
    {
        std::string got;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) got += ',';
            got += fields[i];
        }
        if (got != kHeader)
            throw SchemaError(0, "bad header row, expected \"" + std::string(kHeader) + "\", got \"" + got + "\"");
    }

    std::vector<DatasetEmail> emails;
    std::set<long> seen_ids;
    long row = 0;
    while (read_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue; // trailing newline
        if (fields.size() != 8)
            throw SchemaError(row, "expected 8 columns, got " + std::to_string(fields.size()));

        DatasetEmail email;
        try {
            std::size_t used = 0;
            email.id = std::stol(fields[0], &used);
            if (used != fields[0].size() || email.id < 0) throw std::invalid_argument("id");
        } catch (const std::exception&) {
            throw SchemaError(row, "bad id: \"" + fields[0] + "\"");
        }
        if (!seen_ids.insert(email.id).second)
            throw SchemaError(row, "duplicate id: " + std::to_string(email.id));

        email.body = fields[1];
        email.sender = fields[2];
        email.receiver = fields[3];
        email.date = fields[4];
        email.subject = fields[5];
        email.urls = decode_urls_cell(fields[6], row);
        const auto label = label_from_string(fields[7]);
        if (!label) throw SchemaError(row, "bad label: \"" + fields[7] + "\"");
        email.label = *label;
        emails.push_back(std::move(email));
    }
    return emails;
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetEmail>& emails) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset: " + path.string());
    out << kHeader << '\n';
    for (const DatasetEmail& email : emails) {
        const nlohmann::json urls(email.urls);
        out << email.id << ',' << csv_escape(email.body) << ',' << csv_escape(email.sender) << ','
            << csv_escape(email.receiver) << ',' << csv_escape(email.date) << ','
            << csv_escape(email.subject) << ',' << csv_escape(urls.dump()) << ','
            << to_string(email.label) << '\n';
    }
    if (!out.flush()) throw IoError("failed writing dataset: " + path.string());
}

} // namespace apollo
