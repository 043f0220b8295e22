#include "cdmn/model_format.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cdmn/error.hpp"

namespace cdmn {

std::string_view to_string(BlockKind kind) {
    switch (kind) {
        case BlockKind::Type: return "type";
        case BlockKind::Function: return "function";
        case BlockKind::Relation: return "relation";
        case BlockKind::Constant: return "constant";
        case BlockKind::Boolean: return "boolean";
        case BlockKind::Table: return "table";
        case BlockKind::Data: return "data";
        case BlockKind::Execute: return "execute";
    }
    return "?";
}

std::string_view to_string(HitPolicy policy) {
    switch (policy) {
        case HitPolicy::Unique: return "U";
        case HitPolicy::Any: return "A";
        case HitPolicy::First: return "F";
        case HitPolicy::Sum: return "C+";
        case HitPolicy::Count: return "C#";
        case HitPolicy::Min: return "C<";
        case HitPolicy::Max: return "C>";
        case HitPolicy::Every: return "E*";
    }
    return "?";
}

std::optional<HitPolicy> parse_hit_policy(std::string_view code) {
    std::string c = trim(code);
    std::transform(c.begin(), c.end(), c.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    if (c == "U") return HitPolicy::Unique;
    if (c == "A") return HitPolicy::Any;
    if (c == "F") return HitPolicy::First;
    if (c == "C+") return HitPolicy::Sum;
    if (c == "C#") return HitPolicy::Count;
    if (c == "C<") return HitPolicy::Min;
    if (c == "C>") return HitPolicy::Max;
    if (c == "E*") return HitPolicy::Every;
    return std::nullopt;
}

bool is_glossary(BlockKind kind) {
    return kind == BlockKind::Type || kind == BlockKind::Function || kind == BlockKind::Relation ||
           kind == BlockKind::Constant || kind == BlockKind::Boolean;
}

bool is_aggregate(HitPolicy policy) {
    return policy == HitPolicy::Sum || policy == HitPolicy::Count || policy == HitPolicy::Min ||
           policy == HitPolicy::Max;
}

std::string trim(std::string_view text) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && is_space(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
    return std::string(text.substr(b, e - b));
}

bool is_dash_cell(std::string_view cell) {
    std::string t = trim(cell);
    return t.empty() || std::all_of(t.begin(), t.end(), [](char c) { return c == '-'; });
}

namespace {

std::optional<BlockKind> parse_block_kind(std::string_view word) {
    std::string w = trim(word);
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (w.rfind("glossary.", 0) == 0) w = w.substr(9);
    if (w == "type") return BlockKind::Type;
    if (w == "function") return BlockKind::Function;
    if (w == "relation") return BlockKind::Relation;
    if (w == "constant") return BlockKind::Constant;
    if (w == "boolean") return BlockKind::Boolean;
    if (w == "table") return BlockKind::Table;
    if (w == "data") return BlockKind::Data;
    if (w == "execute") return BlockKind::Execute;
    return std::nullopt;
}

std::vector<std::string> split_cells(std::string_view part) {
    std::vector<std::string> cells;
    if (trim(part).empty()) return cells;
    std::size_t start = 0;
    while (true) {
        std::size_t bar = part.find('|', start);
        if (bar == std::string_view::npos) {
            cells.push_back(trim(part.substr(start)));
            break;
        }
        cells.push_back(trim(part.substr(start, bar - start)));
        start = bar + 1;
    }
    return cells;
}

RawRow split_row(std::string_view line, int line_no) {
    RawRow row;
    row.line = line_no;
    std::size_t sep = line.find("||");
    if (sep == std::string_view::npos) {
        row.inputs = split_cells(line);
    } else {
        row.inputs = split_cells(line.substr(0, sep));
        row.outputs = split_cells(line.substr(sep + 2));
    }
    return row;
}

bool is_integer_cell(const std::string& cell) {
    return !cell.empty() && std::all_of(cell.begin(), cell.end(),
                                        [](unsigned char c) { return std::isdigit(c) != 0; });
}

struct PendingLine {
    std::string text;
    int line;
};

RawBlock build_block(const std::vector<PendingLine>& lines) {
    RawBlock block;
    block.first_line = lines.front().line;
    block.last_line = lines.back().line;
    const std::string first = trim(lines.front().text);

    std::string lowered = first;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "execute" || lowered == "execute:") {
        block.kind = BlockKind::Execute;
    } else {
        std::size_t colon = first.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::UnknownBlockKind, block.first_line,
                        "block must start with '<kind>: <title>', got '" + first + "'");
        }
        auto kind = parse_block_kind(first.substr(0, colon));
        if (!kind) {
            throw Error(ErrorCode::UnknownBlockKind, block.first_line,
                        "unknown block kind '" + trim(first.substr(0, colon)) + "'");
        }
        block.kind = *kind;
        block.title = trim(first.substr(colon + 1));
    }

    if (lines.size() < 2) {
        throw Error(ErrorCode::EmptyTable, block.first_line,
                    std::string(to_string(block.kind)) + " block has no header row");
    }

    if (block.kind == BlockKind::Execute) {
        block.header.inputs = {trim(lines[1].text)};
        block.header.line = lines[1].line;
        for (std::size_t i = 2; i < lines.size(); ++i) {
            RawRow row;
            row.inputs = {trim(lines[i].text)};
            row.line = lines[i].line;
            block.rows.push_back(std::move(row));
        }
        return block;
    }

    block.header = split_row(lines[1].text, lines[1].line);
    if (block.kind == BlockKind::Table) {
        if (block.header.inputs.empty()) {
            throw Error(ErrorCode::UnknownHitPolicy, block.header.line,
                        "table header must start with a hit policy cell");
        }
        auto policy = parse_hit_policy(block.header.inputs.front());
        if (!policy) {
            throw Error(ErrorCode::UnknownHitPolicy, block.header.line,
                        "unknown hit policy '" + block.header.inputs.front() + "'");
        }
        block.hit_policy = *policy;
        block.header.inputs.erase(block.header.inputs.begin());
    }

    const std::size_t n_in = block.header.inputs.size();
    const std::size_t n_out = block.header.outputs.size();
    for (std::size_t i = 2; i < lines.size(); ++i) {
        RawRow row = split_row(lines[i].text, lines[i].line);
        if (row.inputs.size() == n_in + 1 && is_integer_cell(row.inputs.front())) {
            row.inputs.erase(row.inputs.begin());
        } else if (row.inputs.empty() && n_in == 1) {
            row.inputs.emplace_back();
        }
        if (row.outputs.empty() && n_out == 1 && lines[i].text.find("||") != std::string::npos) {
            row.outputs.emplace_back();
        }
        if (row.inputs.size() != n_in || row.outputs.size() != n_out) {
            std::ostringstream msg;
            msg << "row has " << row.inputs.size() << " input and " << row.outputs.size()
                << " output cells, header has " << n_in << " and " << n_out;
            throw Error(ErrorCode::ColumnCountMismatch, row.line, msg.str());
        }
        block.rows.push_back(std::move(row));
    }
    return block;
}

}  // namespace

RawModel parse_model(std::string_view source, std::string source_name) {
    RawModel model;
    model.source_name = std::move(source_name);

    std::vector<PendingLine> pending;
    bool seen_execute = false;
    auto flush = [&] {
        if (pending.empty()) return;
        RawBlock block = build_block(pending);
        if (block.kind == BlockKind::Execute) {
            if (seen_execute) {
                throw Error(ErrorCode::DuplicateExecuteBlock, block.first_line,
                            "a model may contain at most one execute block");
            }
            seen_execute = true;
        }
        model.blocks.push_back(std::move(block));
        pending.clear();
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        std::size_t nl = source.find('\n', pos);
        std::string_view line =
            source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::string t = trim(line);
        if (t.empty()) {
            flush();
        } else if (t.front() != '#') {
            pending.push_back({std::string(line), line_no});
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    flush();
    return model;
}

namespace {

std::string join_cells(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out += " | ";
        out += cells[i];
    }
    return out;
}

std::string print_row(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                      bool with_separator) {
    std::string out = join_cells(inputs);
    if (with_separator) {
        if (!out.empty()) out += ' ';
        out += "||";
        if (!outputs.empty()) out += ' ' + join_cells(outputs);
    }
    return out;
}

}  // namespace

std::string print_model(const RawModel& model) {
    std::ostringstream out;
    bool first = true;
    for (const RawBlock& block : model.blocks) {
        if (!first) out << '\n';
        first = false;
        if (block.kind == BlockKind::Execute) {
            out << "execute\n" << block.header.inputs.front() << '\n';
            for (const RawRow& row : block.rows) out << row.inputs.front() << '\n';
            continue;
        }
        out << to_string(block.kind) << ':';
        if (!block.title.empty()) out << ' ' << block.title;
        out << '\n';
        const bool separator = !is_glossary(block.kind);
        std::vector<std::string> header_inputs = block.header.inputs;
        if (block.hit_policy) {
            header_inputs.insert(header_inputs.begin(), std::string(to_string(*block.hit_policy)));
        }
        out << print_row(header_inputs, block.header.outputs, separator) << '\n';
        for (const RawRow& row : block.rows) {
            out << print_row(row.inputs, row.outputs, separator) << '\n';
        }
    }
    return out.str();
}

bool structurally_equal(const RawModel& a, const RawModel& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        const RawBlock& x = a.blocks[i];
        const RawBlock& y = b.blocks[i];
        if (x.kind != y.kind || x.title != y.title || x.hit_policy != y.hit_policy) return false;
        if (x.header.inputs != y.header.inputs || x.header.outputs != y.header.outputs) return false;
        if (x.rows.size() != y.rows.size()) return false;
        for (std::size_t r = 0; r < x.rows.size(); ++r) {
            if (x.rows[r].inputs != y.rows[r].inputs || x.rows[r].outputs != y.rows[r].outputs) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace cdmn
