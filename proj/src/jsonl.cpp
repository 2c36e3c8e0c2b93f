#include "persim/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "persim/error.hpp"

namespace persim {

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void atomic_write_file(const std::filesystem::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write file: " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw DataError("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void for_each_jsonl(const std::filesystem::path &path,
                    const std::function<void(const Json &, std::size_t)> &fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        Json row = Json::parse(line, nullptr, false);
        if (row.is_discarded()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed JSON line");
        }
        fn(row, line_no);
    }
}

std::vector<Json> read_jsonl(const std::filesystem::path &path) {
    std::vector<Json> rows;
    for_each_jsonl(path, [&rows](const Json &row, std::size_t) { rows.push_back(row); });
    return rows;
}

std::string to_jsonl(const std::vector<Json> &rows) {
    std::string out;
    for (const auto &row : rows) {
        out += row.dump();
        out += '\n';
    }
    return out;
}

void write_jsonl(const std::filesystem::path &path, const std::vector<Json> &rows) {
    atomic_write_file(path, to_jsonl(rows));
}

void append_jsonl_line(const std::filesystem::path &path, const Json &row) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) {
        throw DataError("cannot append to file: " + path.string());
    }
    out << row.dump() << '\n';
    out.flush();
    if (!out) {
        throw DataError("append failed: " + path.string());
    }
}

} // namespace persim
