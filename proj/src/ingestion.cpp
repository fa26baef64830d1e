#include "bergm/ingestion.hpp"

#include "bergm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <clocale>
#include <cwctype>
#include <fstream>
#include <locale.h>
#include <map>
#include <set>
#include <sstream>
#include <wctype.h>

namespace bergm {

namespace {

/// C.UTF-8 gives Unicode-wide classification and case mapping on glibc.
locale_t unicode_locale() {
    static const locale_t loc = [] {
        locale_t l = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(nullptr));
        if (l == static_cast<locale_t>(nullptr)) {
            l = newlocale(LC_CTYPE_MASK, "C.utf8", static_cast<locale_t>(nullptr));
        }
        return l;
    }();
    return loc;
}

constexpr char32_t invalid = 0xFFFFFFFF;

/// Decodes one code point at text[pos], advancing pos; `invalid` on bad input.
char32_t decode(std::string_view text, std::size_t& pos) {
    const auto lead = static_cast<unsigned char>(text[pos++]);
    if (lead < 0x80) return lead;
    int extra;
    char32_t cp;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        return invalid;
    }
    for (int i = 0; i < extra; ++i) {
        if (pos >= text.size()) return invalid;
        const auto c = static_cast<unsigned char>(text[pos]);
        if ((c & 0xC0) != 0x80) return invalid;
        cp = (cp << 6) | (c & 0x3F);
        ++pos;
    }
    return cp;
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
    const locale_t loc = unicode_locale();
    if (loc == static_cast<locale_t>(nullptr)) return true;
    return iswalnum_l(static_cast<wint_t>(cp), loc) != 0;
}

char32_t to_lower(char32_t cp) {
    if (cp < 0x80) return static_cast<char32_t>(std::tolower(static_cast<int>(cp)));
    const locale_t loc = unicode_locale();
    if (loc == static_cast<locale_t>(nullptr)) return cp;
    return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), loc));
}

bool all_digits(const std::string& token) {
    return std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::optional<double> parse_number(std::string_view text) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !all_digits(current)) tokens.push_back(current);
        current.clear();
    };
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char32_t cp = decode(text, pos);
        if (cp != invalid && is_word_char(cp)) {
            encode(to_lower(cp), current);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

// ---------------------------------------------------------------------------

void SkillDictionary::add(std::string skill, std::span<const std::string> patterns) {
    if (std::find(skills_.begin(), skills_.end(), skill) != skills_.end()) {
        throw ValidationError("duplicate skill '" + skill + "' in dictionary");
    }
    if (patterns.empty()) throw ValidationError("skill '" + skill + "' has no patterns");
    std::vector<std::vector<std::string>> tokenized;
    for (const auto& pattern : patterns) {
        auto tokens = tokenize(pattern);
        if (tokens.empty()) {
            throw ValidationError("skill '" + skill + "': pattern '" + pattern + "' has no word tokens");
        }
        tokenized.push_back(std::move(tokens));
    }
    skills_.push_back(std::move(skill));
    patterns_.push_back(std::move(tokenized));
}

void Corpus::check_unique(const std::string& id) const {
    const bool seen = std::any_of(documents_.begin(), documents_.end(),
                                  [&](const Document& d) { return d.id == id; }) ||
                      std::find(skipped_.begin(), skipped_.end(), id) != skipped_.end();
    if (seen) throw ValidationError("duplicate document id '" + id + "'");
}

void Corpus::add(std::string id, std::string_view text) {
    add_tokens(std::move(id), tokenize(text));
}

void Corpus::add_tokens(std::string id, std::vector<std::string> tokens) {
    check_unique(id);
    if (tokens.empty()) {
        skipped_.push_back(std::move(id));
        return;
    }
    documents_.push_back({std::move(id), std::move(tokens)});
}

Corpus load_corpus(const std::filesystem::path& directory) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) {
        throw ValidationError("corpus directory '" + directory.string() + "' does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    Corpus corpus;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw ValidationError("cannot read '" + file.string() + "'");
        std::ostringstream text;
        text << in.rdbuf();
        corpus.add(file.stem().string(), text.str());
    }
    return corpus;
}

BuildResult build_network(const Corpus& corpus, const SkillDictionary& dictionary) {
    if (dictionary.size() == 0) throw ValidationError("skills dictionary is empty");
    std::vector<std::string> second;
    for (const auto& doc : corpus.documents()) second.push_back(doc.id);

    BuildResult result;
    std::vector<Dyad> edges;
    for (std::size_t s = 0; s < dictionary.size(); ++s) {
        for (std::size_t d = 0; d < corpus.documents().size(); ++d) {
            const auto& tokens = corpus.documents()[d].tokens;
            PatternMatch match{s, d, {}};
            for (const auto& pattern : dictionary.patterns(s)) {
                if (std::search(tokens.begin(), tokens.end(), pattern.begin(), pattern.end()) ==
                    tokens.end()) {
                    continue;
                }
                std::string joined;
                for (const auto& t : pattern) joined += (joined.empty() ? "" : " ") + t;
                match.patterns.push_back(std::move(joined));
            }
            if (!match.patterns.empty()) {
                edges.push_back({s, d});
                result.matches.push_back(std::move(match));
            }
        }
    }
    result.graph = BipartiteGraph(dictionary.skills(), std::move(second), edges);
    return result;
}

// ---------------------------------------------------------------------------

AttributeTable attach_attributes(const BipartiteGraph& graph, std::span<const AttributeRecord> records,
                                 std::span<const AttributeRequirement> required) {
    struct Pending {
        Side side;
        std::vector<std::pair<std::size_t, std::string>> values;
        std::map<std::size_t, std::string> seen;
    };
    std::map<std::string, Pending> pending;
    std::vector<std::string> order;

    for (const auto& record : records) {
        const auto first = graph.find(Side::first, record.label);
        const auto second = graph.find(Side::second, record.label);
        Side side;
        std::size_t node;
        if (record.side) {
            side = *record.side;
            const auto& hit = side == Side::first ? first : second;
            if (!hit) {
                throw ValidationError("attribute '" + record.attribute + "': unknown " +
                                      std::string(to_string(side)) + "-partition label '" +
                                      record.label + "'");
            }
            node = *hit;
        } else if (first && second) {
            throw ValidationError("attribute '" + record.attribute + "': label '" + record.label +
                                  "' exists in both partitions; give its partition explicitly");
        } else if (first) {
            side = Side::first;
            node = *first;
        } else if (second) {
            side = Side::second;
            node = *second;
        } else {
            throw ValidationError("attribute '" + record.attribute + "': unknown node label '" +
                                  record.label + "'");
        }

        auto [it, inserted] = pending.try_emplace(record.attribute, Pending{side, {}, {}});
        if (inserted) order.push_back(record.attribute);
        Pending& p = it->second;
        if (p.side != side) {
            throw ValidationError("attribute '" + record.attribute + "' is assigned to nodes of both partitions");
        }
        const std::string value = trim(record.value);
        if (value.empty()) continue;  // explicit missing value
        if (auto prior = p.seen.find(node); prior != p.seen.end()) {
            if (prior->second != value) {
                throw ValidationError("attribute '" + record.attribute + "' assigned twice to '" +
                                      record.label + "' with different values");
            }
            continue;
        }
        p.seen.emplace(node, value);
        p.values.emplace_back(node, value);
    }

    auto requirement_for = [&](const std::string& name) -> const AttributeRequirement* {
        for (const auto& r : required) {
            if (r.name == name) return &r;
        }
        return nullptr;
    };

    AttributeTable table(graph);
    for (const auto& name : order) {
        const Pending& p = pending.at(name);
        const bool numeric = std::all_of(p.values.begin(), p.values.end(),
                                         [](const auto& v) { return parse_number(v.second).has_value(); });
        AttributeKind kind = numeric && !p.values.empty() ? AttributeKind::quantitative
                                                          : AttributeKind::categorical;
        if (const auto* req = requirement_for(name)) {
            if (req->side && *req->side != p.side) {
                throw ValidationError("attribute '" + name + "' must be on the " +
                                      std::string(to_string(*req->side)) + " partition");
            }
            if (req->kind == AttributeKind::quantitative && kind != AttributeKind::quantitative) {
                throw ValidationError("attribute '" + name + "' must be quantitative but has non-numeric values");
            }
            if (req->kind) kind = *req->kind;
        }
        table.declare(name, p.side, kind);
        for (const auto& [node, value] : p.values) {
            if (kind == AttributeKind::quantitative) {
                table.set_number(name, p.side, node, *parse_number(value));
            } else {
                table.set_level(name, p.side, node, value);
            }
        }
    }

    for (const auto& req : required) {
        if (table.find(req.name) == nullptr) {
            throw ValidationError("required attribute '" + req.name + "' is not defined");
        }
        table.require_total(req.name, graph);
    }
    return table;
}

} // namespace bergm
