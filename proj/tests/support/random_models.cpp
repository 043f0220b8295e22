#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "support.hpp"

namespace cdmn::testing {

namespace {

class Generator {
public:
    Generator(std::uint64_t seed, bool optimize) : rng_(seed), optimize_(optimize) {}

    std::string run() {
        items_ = 2 + pick(2);
        level_max_ = 1 + pick(3);
        picked_ = coin();
        chosen_ = coin();
        flag_ = coin();
        weight_ = coin();
        total_ = optimize_ ? pick(3) != 0 : coin();

        std::vector<std::string> tables;
        if (total_) tables.push_back(aggregate_table());
        if (flag_ && coin()) tables.push_back(decision_table());
        const std::size_t wanted = 1 + pick(3);
        while (tables.size() < wanted) tables.push_back(constraint_table(tables.size()));

        std::ostringstream out;
        out << "type: Types\nName | Type | Values\nItem | string | ";
        for (int i = 1; i <= items_; ++i) out << (i > 1 ? ", " : "") << item(i);
        out << "\nLevel | int | [0.." << level_max_ << "]\n\n";
        out << "function: Functions\nName | Type\nLevel of Item | Level\n";
        if (weight_) out << "Weight of Item | int\n";
        out << "\n";
        if (picked_) out << "relation: Relations\nName\nItem is picked\n\n";
        if (chosen_ || total_) {
            out << "constant: Constants\nName | Type\n";
            if (chosen_) out << "Chosen | Item\n";
            if (total_) out << "Total | int\n";
            out << "\n";
        }
        if (flag_) out << "boolean: Booleans\nName\nFlag\n\n";
        if (weight_) {
            out << "data: Weights\nItem || Weight of Item\n";
            for (int i = 1; i <= items_; ++i) out << item(i) << " || " << pick(4) << "\n";
            out << "\n";
        }
        for (const std::string& t : tables) out << t << "\n";
        out << "execute\n";
        if (optimize_) {
            out << (coin() ? "Minimize " : "Maximize ") << objective() << "\n";
        } else {
            out << "get all models\n";
        }
        return out.str();
    }

private:
    int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
    bool coin() { return pick(2) == 0; }
    static std::string item(int i) { return "i" + std::to_string(i); }

    std::string numeric_cell(int max) {
        const int a = pick(max + 1);
        const int b = a + pick(max - a + 1);
        switch (pick(11)) {
            case 0: return "-";
            case 1: return std::to_string(a);
            case 2: return "< " + std::to_string(a);
            case 3: return "<= " + std::to_string(a);
            case 4: return ">= " + std::to_string(a);
            case 5: return "> " + std::to_string(a);
            case 6: return "not(" + std::to_string(a) + ")";
            case 7: return a == b ? std::to_string(a) : std::to_string(a) + ", " + std::to_string(b);
            case 8: return "[" + std::to_string(a) + ".." + std::to_string(b) + "]";
            case 9: return "(" + std::to_string(a) + ".." + std::to_string(b) + "]";
            default: return "[" + std::to_string(a) + ".." + std::to_string(b) + ")";
        }
    }

    std::string bool_cell() {
        static const char* cells[] = {"Yes", "No", "-"};
        return cells[pick(3)];
    }

    std::string item_cell(bool with_var) {
        const int a = 1 + pick(items_);
        const int b = 1 + pick(items_);
        switch (pick(with_var ? 6 : 4)) {
            case 0: return "-";
            case 1: return item(a);
            case 2: return "not(" + item(a) + ")";
            case 3: return a == b ? item(a) : item(a) + ", " + item(b);
            case 4: return "x";
            default: return "not(x)";
        }
    }

    struct Column {
        std::string header;
        std::function<std::string()> cell;
    };

    std::vector<Column> input_pool(bool with_y) {
        std::vector<Column> pool;
        pool.push_back({"Level of x", [this] { return numeric_cell(level_max_); }});
        if (picked_) pool.push_back({"x is picked", [this] { return bool_cell(); }});
        if (weight_) pool.push_back({"Weight of x", [this] { return numeric_cell(3); }});
        if (chosen_) pool.push_back({"Chosen", [this] { return item_cell(true); }});
        if (flag_) pool.push_back({"Flag", [this] { return bool_cell(); }});
        if (total_) pool.push_back({"Total", [this] { return numeric_cell(2 * level_max_); }});
        if (with_y) {
            pool.push_back({"Level of y", [this] {
                                static const char* cells[] = {"= Level of x", "not(Level of x)", "< Level of x",
                                                              ">= Level of x", "-"};
                                return std::string(cells[pick(5)]);
                            }});
        }
        return pool;
    }

    std::vector<Column> output_pool(bool with_y) {
        std::vector<Column> pool;
        pool.push_back({"Level of x", [this] { return numeric_cell(level_max_); }});
        if (picked_) pool.push_back({"x is picked", [this] { return bool_cell(); }});
        if (chosen_) pool.push_back({"Chosen", [this] { return item_cell(true); }});
        if (flag_) pool.push_back({"Flag", [this] { return bool_cell(); }});
        if (with_y) pool.push_back({"Level of y", [this] { return coin() ? "not(Level of x)" : "= Level of x"; }});
        return pool;
    }

    std::string constraint_table(std::size_t index) {
        const bool with_y = pick(3) == 0;
        std::vector<Column> inputs = input_pool(with_y);
        std::vector<Column> outputs = output_pool(with_y);
        std::shuffle(inputs.begin(), inputs.end(), rng_);
        inputs.resize(std::min<std::size_t>(inputs.size(), 1 + pick(2)));
        const Column out = outputs[pick(static_cast<int>(outputs.size()))];

        std::ostringstream t;
        t << "table: Constraint " << index << "\nE* | Item called x";
        if (with_y) t << " | Item called y";
        for (const Column& c : inputs) t << " | " << c.header;
        t << " || " << out.header << "\n";
        const int rows = 1 + pick(3);
        for (int r = 0; r < rows; ++r) {
            t << "- ";
            if (with_y) t << "| " << (coin() ? "-" : "not(x)") << " ";
            for (const Column& c : inputs) t << "| " << c.cell() << " ";
            t << "|| " << out.cell() << "\n";
        }
        return t.str();
    }

    std::string decision_table() {
        static const char* policies[] = {"U", "A", "F"};
        const bool on_chosen = chosen_ && coin();
        std::ostringstream t;
        t << "table: Flag rule\n" << policies[pick(3)] << " | " << (on_chosen ? "Chosen" : "Level of i1") << " || Flag";
        if (coin()) t << " default " << (coin() ? "Yes" : "No");
        t << "\n";
        const int rows = 1 + pick(3);
        for (int r = 0; r < rows; ++r) {
            t << (on_chosen ? item_cell(false) : numeric_cell(level_max_)) << " || " << (coin() ? "Yes" : "No") << "\n";
        }
        return t.str();
    }

    std::string aggregate_table() {
        static const char* policies[] = {"C+", "C#", "C<", "C>"};
        const std::string policy = policies[pick(4)];
        const bool extremum = policy == "C<" || policy == "C>";
        const bool on_picked = picked_ && coin();
        std::ostringstream t;
        t << "table: Total\n" << policy << " | Item called x | " << (on_picked ? "x is picked" : "Level of x")
          << " || Total\n";
        const int rows = 1 + pick(2);
        for (int r = 0; r < rows; ++r) {
            // A dash in the first row keeps min / max selections non-empty.
            std::string cond = extremum && r == 0 ? "-" : (on_picked ? bool_cell() : numeric_cell(level_max_));
            std::string body = "-";
            if (policy != "C#") {
                static const char* bodies[] = {"Level of x", "Level of x * 2", "1", "Level of x + 1"};
                body = bodies[pick(4)];
                if (weight_ && coin()) body = "Weight of x";
            }
            t << "- | " << cond << " || " << body << "\n";
        }
        return t.str();
    }

    std::string objective() {
        if (total_ && pick(3) != 0) return "Total";
        switch (pick(3)) {
            case 0: return "Level of i1";
            case 1: return "Level of i1 + Level of i2";
            default: return "Level of i2 * 2 - Level of i1";
        }
    }

    std::mt19937_64 rng_;
    bool optimize_;
    int items_ = 2;
    int level_max_ = 1;
    bool picked_ = false;
    bool chosen_ = false;
    bool flag_ = false;
    bool weight_ = false;
    bool total_ = false;
};

}  // namespace

std::string random_model(std::uint64_t seed, bool optimize) { return Generator(seed, optimize).run(); }

SuiteResult run_random_suite(int count, std::uint64_t first_seed) {
    SuiteResult result;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
        const bool optimize = i % 2 == 1;
        ++result.total;
        if (optimize) ++result.optimizing;
        Comparison c;
        try {
            c = compare_with_oracle(compile_source(random_model(seed, optimize), "random"));
        } catch (const std::exception& e) {
            c.detail = e.what();
        }
        if (c.agree) {
            ++result.agreed;
        } else {
            result.failures.push_back("seed " + std::to_string(seed) + ": " + c.detail);
        }
    }
    return result;
}

}  // namespace cdmn::testing
