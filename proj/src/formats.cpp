#include "tracegen/formats.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tracegen {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string w;
    while (iss >> w)
        out.push_back(w);
    return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw InputError("line " + std::to_string(line_no) + ": " + what);
}

double parse_weight(const std::string& token, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(token, &pos);
        if (pos != token.size())
            parse_fail(line_no, "trailing characters in number '" + token + "'");
        return v;
    } catch (const std::logic_error&) {
        parse_fail(line_no, "expected a number, got '" + token + "'");
    }
}

std::string format_weight(double w) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

} // namespace

void print_trace(std::ostream& os, const TraceMonoid& m, const Trace& t) {
    for (CliqueMask c : t.cliques) {
        bool first = true;
        for (LetterId a : clique_letters(c)) {
            if (!first)
                os << ' ';
            os << m.name(a);
            first = false;
        }
        os << '\n';
    }
    os << "%\n";
}

std::string trace_to_text(const TraceMonoid& m, const Trace& t) {
    std::ostringstream oss;
    print_trace(oss, m, t);
    return oss.str();
}

std::optional<Trace> read_trace(std::istream& is, const TraceMonoid& m) {
    Trace t;
    std::string line;
    bool saw_any = false;
    while (std::getline(is, line)) {
        saw_any = true;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        if (line == "%") {
            validate_trace(m, t);
            return t;
        }
        CliqueMask c = 0;
        for (const std::string& w : split_words(line))
            c |= letter_bit(m.letter(w));
        t.cliques.push_back(c);
    }
    if (saw_any && !t.cliques.empty())
        throw InputError("trace record not closed by a '%' line");
    return std::nullopt;
}

void print_monoid(std::ostream& os, const TraceMonoid& m) {
    os << "letters:";
    for (const auto& n : m.names())
        os << ' ' << n;
    os << '\n';
    for (LetterId a = 0; a < m.letter_count(); ++a)
        for (LetterId b = a + 1; b < m.letter_count(); ++b)
            if (m.independent(a, b))
                os << m.name(a) << ' ' << m.name(b) << '\n';
}

TraceMonoid parse_monoid(std::istream& is) {
    std::string line;
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        if (line.rfind("letters:", 0) == 0) {
            names = split_words(line.substr(8));
            continue;
        }
        auto words = split_words(line);
        if (words.size() != 2)
            parse_fail(line_no, "expected an independence pair 'a b'");
        pairs.emplace_back(words[0], words[1]);
    }
    if (names.empty())
        throw InputError("monoid file is missing its 'letters:' line");
    std::vector<std::pair<LetterId, LetterId>> ids;
    auto find = [&](const std::string& n) -> LetterId {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n)
                return static_cast<LetterId>(i);
        throw InputError("independence pair uses undeclared letter " + n);
    };
    for (const auto& [a, b] : pairs)
        ids.emplace_back(find(a), find(b));
    return TraceMonoid::make(names, ids);
}

void print_network(std::ostream& os, const AlphabetNetwork& net) {
    os << "letters:";
    for (const auto& n : net.letter_names())
        os << ' ' << n;
    os << '\n';
    for (std::size_t i = 0; i < net.component_count(); ++i) {
        os << "alphabet " << (i + 1) << ':';
        for (LetterId a : net.alphabet(i))
            os << ' ' << net.letter_name(a);
        os << '\n';
    }
}

void print_valuation(std::ostream& os, const Valuation& f) {
    const TraceMonoid& m = f.monoid();
    for (LetterId a : clique_letters(f.domain()))
        os << m.name(a) << '=' << format_weight(f.weight(a)) << '\n';
}

void print_dists(std::ostream& os, const AlphabetNetwork& net,
                 const std::vector<LocalDistribution>& dists) {
    for (std::size_t i = 0; i < dists.size(); ++i) {
        os << (i + 1) << ':';
        for (auto [a, w] : dists[i].weights())
            os << ' ' << net.letter_name(a) << '=' << format_weight(w);
        os << ' ' << (dists[i].kind() == DistKind::Probability ? "(prob)" : "(sub)") << '\n';
    }
}

void print_word_vector(std::ostream& os, const AlphabetNetwork& net, const WordVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i + 1) << ':';
        for (LetterId a : v[i].letters)
            os << ' ' << net.letter_name(a);
        os << " | " << (v[i].tag == FeedTag::EndOfInput ? "EOF" : "WFI") << '\n';
    }
}

namespace {

struct RawSection {
    std::string name;
    std::vector<std::pair<std::size_t, std::string>> lines; // (line number, text)
};

std::vector<RawSection> split_sections(std::istream& is) {
    std::vector<RawSection> sections;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                parse_fail(line_no, "malformed section header " + line);
            sections.push_back({line.substr(1, line.size() - 2), {}});
            continue;
        }
        if (sections.empty())
            parse_fail(line_no, "content before the first [section] header");
        sections.back().lines.emplace_back(line_no, line);
    }
    return sections;
}

AlphabetNetwork parse_network_section(const RawSection& sec) {
    std::vector<std::string> letters;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> alphabets; // (index, letters)
    for (const auto& [line_no, line] : sec.lines) {
        if (line.rfind("letters:", 0) == 0) {
            letters = split_words(line.substr(8));
            continue;
        }
        if (line.rfind("alphabet", 0) == 0) {
            std::size_t colon = line.find(':');
            if (colon == std::string::npos)
                parse_fail(line_no, "alphabet line is missing ':'");
            std::string idx = trim(line.substr(8, colon - 8));
            std::size_t index = 0;
            try {
                index = std::stoul(idx);
            } catch (const std::logic_error&) {
                parse_fail(line_no, "bad alphabet index '" + idx + "'");
            }
            if (index == 0)
                parse_fail(line_no, "alphabet indices are 1-based");
            alphabets.emplace_back(index, split_words(line.substr(colon + 1)));
            continue;
        }
        parse_fail(line_no, "unrecognized network line: " + line);
    }
    std::vector<std::vector<std::string>> ordered(alphabets.size());
    for (const auto& [index, names] : alphabets) {
        if (index > alphabets.size())
            throw InputError("alphabet indices must be 1.." + std::to_string(alphabets.size()));
        if (!ordered[index - 1].empty())
            throw InputError("alphabet " + std::to_string(index) + " declared twice");
        ordered[index - 1] = names;
    }
    if (letters.empty())
        return AlphabetNetwork::make(ordered);
    return AlphabetNetwork::make_with_letters(letters, ordered);
}

TraceMonoid parse_monoid_section(const RawSection& sec) {
    std::ostringstream body;
    for (const auto& [line_no, line] : sec.lines)
        body << line << '\n';
    std::istringstream iss(body.str());
    return parse_monoid(iss);
}

RawDist parse_dist_line(std::size_t line_no, const std::string& line) {
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
        parse_fail(line_no, "distribution line is missing ':'");
    RawDist d;
    try {
        d.index = std::stoul(trim(line.substr(0, colon)));
    } catch (const std::logic_error&) {
        parse_fail(line_no, "bad distribution index");
    }
    if (d.index == 0)
        parse_fail(line_no, "distribution indices are 1-based");
    for (const std::string& tok : split_words(line.substr(colon + 1))) {
        if (tok == "(prob)") {
            d.declared_kind = DistKind::Probability;
            continue;
        }
        if (tok == "(sub)") {
            d.declared_kind = DistKind::SubProbability;
            continue;
        }
        std::size_t eq = tok.find('=');
        if (eq == std::string::npos)
            parse_fail(line_no, "expected letter=weight, got '" + tok + "'");
        d.weights.emplace_back(tok.substr(0, eq), parse_weight(tok.substr(eq + 1), line_no));
    }
    if (d.weights.empty())
        parse_fail(line_no, "distribution line has no weights");
    return d;
}

} // namespace

RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    for (const RawSection& sec : split_sections(is)) {
        if (sec.name == "network") {
            cfg.network = parse_network_section(sec);
        } else if (sec.name == "monoid") {
            cfg.monoid = parse_monoid_section(sec);
        } else if (sec.name == "dists") {
            cfg.has_dists = true;
            for (const auto& [line_no, line] : sec.lines)
                cfg.dists.push_back(parse_dist_line(line_no, line));
        } else if (sec.name == "targets") {
            cfg.has_targets = true;
            for (const auto& [line_no, line] : sec.lines) {
                if (line == "uniform") {
                    cfg.targets_uniform = true;
                    continue;
                }
                for (const std::string& tok : split_words(line)) {
                    std::size_t eq = tok.find('=');
                    if (eq == std::string::npos)
                        parse_fail(line_no, "expected letter=target, got '" + tok + "'");
                    cfg.targets[tok.substr(0, eq)] = parse_weight(tok.substr(eq + 1), line_no);
                }
            }
        } else if (sec.name == "run") {
            for (const auto& [line_no, line] : sec.lines) {
                std::size_t colon = line.find(':');
                if (colon == std::string::npos)
                    parse_fail(line_no, "run lines use 'key: value'");
                cfg.run[trim(line.substr(0, colon))] = trim(line.substr(colon + 1));
            }
        } else {
            throw InputError("unknown config section [" + sec.name + "]");
        }
    }
    return cfg;
}

std::vector<LocalDistribution> bind_dists(const AlphabetNetwork& net,
                                          const std::vector<RawDist>& raw) {
    std::vector<std::optional<LocalDistribution>> slots(net.component_count());
    for (const RawDist& r : raw) {
        if (r.index > net.component_count())
            throw InputError("distribution index " + std::to_string(r.index) +
                             " exceeds the network's " + std::to_string(net.component_count()) +
                             " alphabets");
        if (slots[r.index - 1])
            throw InputError("distribution " + std::to_string(r.index) + " declared twice");
        std::vector<std::pair<LetterId, double>> weights;
        for (const auto& [name, w] : r.weights)
            weights.emplace_back(net.letter(name), w);
        LocalDistribution d = LocalDistribution::make(std::move(weights));
        if (r.declared_kind && d.kind() != *r.declared_kind)
            throw InputError("distribution " + std::to_string(r.index) + " weights are " +
                             (d.kind() == DistKind::Probability ? "a probability" : "a sub-probability") +
                             " vector but the line declares the opposite kind");
        slots[r.index - 1] = std::move(d);
    }
    std::vector<LocalDistribution> out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i])
            throw InputError("missing distribution for alphabet " + std::to_string(i + 1));
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open config file " + path);
    return parse_config(in);
}

} // namespace tracegen
