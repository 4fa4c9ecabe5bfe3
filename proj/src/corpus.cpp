#include "currikit/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "currikit/error.hpp"

namespace currikit {

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    return in;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool is_word_byte(unsigned char c) {
    if (c >= 0x80) return true;  // any UTF-8 continuation/lead byte
    return std::isalnum(c) != 0 || c == '\'';
}

}  // namespace

const std::vector<std::string>& default_ptb_tagset() {
    static const std::vector<std::string> tags = {
        "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
        "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
        "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
        "VBZ", "WDT", "WP", "WP$", "WRB",
        // punctuation tags
        "#", "$", "''", "(", ")", ",", ".", ":", "``", "-LRB-", "-RRB-",
    };
    return tags;
}

void for_each_caption(const std::filesystem::path& path,
                      const std::function<void(CaptionRecord&&)>& sink) {
    std::ifstream in = open_or_throw(path);
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("malformed JSON at line " + std::to_string(line_no) + ": " +
                                  e.what());
        }
        if (!obj.is_object() || !obj.contains("sample_id") || !obj.contains("image") ||
            !obj.contains("captions")) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": expected object with sample_id/image/captions keys");
        }

        CaptionRecord rec;
        try {
            rec.sample_id = obj.at("sample_id").get<std::string>();
            rec.image_ref = obj.at("image").get<std::string>();
            rec.captions = obj.at("captions").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": bad field type: " +
                                  e.what());
        }

        if (rec.sample_id.empty())
            throw ValidationError("empty sample_id at line " + std::to_string(line_no));
        if (!seen_ids.insert(rec.sample_id).second)
            throw ValidationError("duplicate sample_id \"" + rec.sample_id + "\" at line " +
                                  std::to_string(line_no));
        if (rec.captions.empty())
            throw ValidationError("empty captions list for sample_id \"" + rec.sample_id +
                                  "\" at line " + std::to_string(line_no));
        for (const auto& caption : rec.captions) {
            if (trim(caption).empty())
                throw ValidationError("blank caption for sample_id \"" + rec.sample_id +
                                      "\" at line " + std::to_string(line_no));
        }
        sink(std::move(rec));
    }
}

std::vector<CaptionRecord> load_captions(const std::filesystem::path& path) {
    std::vector<CaptionRecord> records;
    for_each_caption(path, [&](CaptionRecord&& rec) { records.push_back(std::move(rec)); });
    return records;
}

void write_captions(const std::vector<CaptionRecord>& records,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (const auto& rec : records) {
        nlohmann::ordered_json obj;
        obj["sample_id"] = rec.sample_id;
        obj["image"] = rec.image_ref;
        obj["captions"] = rec.captions;
        out << obj.dump() << "\n";
    }
}

TaggedCorpus load_tagged_corpus(const std::filesystem::path& path,
                                const std::vector<std::string>& tagset) {
    std::ifstream in = open_or_throw(path);
    std::unordered_set<std::string> allowed(tagset.begin(), tagset.end());

    TaggedCorpus corpus;
    TaggedSentence current;
    std::string line;
    std::size_t line_no = 0;
    bool previous_blank = true;  // leading blank lines count as empty sentences

    auto flush = [&] {
        if (!current.tokens.empty()) {
            corpus.sentences.push_back(std::move(current));
            current = TaggedSentence{};
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (previous_blank) ++corpus.skipped_empty;
            flush();
            previous_blank = true;
            continue;
        }
        previous_blank = false;

        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": expected word<TAB>tag");
        std::string word = line.substr(0, tab);
        std::string tag = line.substr(tab + 1);
        if (!allowed.empty() && allowed.count(tag) == 0)
            throw ValidationError("unknown tag " + tag + " at line " + std::to_string(line_no));
        current.tokens.emplace_back(std::move(word), std::move(tag));
    }
    flush();
    return corpus;
}

TextCorpus load_text_corpus(const std::filesystem::path& path, DocSeparator separator) {
    std::ifstream in = open_or_throw(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    if (auto offset = find_invalid_utf8(bytes))
        throw ValidationError("invalid UTF-8 at byte offset " + std::to_string(*offset) +
                              " in " + path.string());

    TextCorpus corpus;
    std::size_t unit_index = 0;
    auto add_unit = [&](std::string text) {
        ++unit_index;
        if (trim(text).empty()) {
            ++corpus.dropped_blank;
            return;
        }
        corpus.documents.push_back(
            TextDocument{"line-" + std::to_string(unit_index), std::move(text)});
    };

    if (separator == DocSeparator::Line) {
        std::istringstream lines(bytes);
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            add_unit(line);
        }
    } else {
        std::istringstream lines(bytes);
        std::string line;
        std::string block;
        auto flush_block = [&] {
            if (!block.empty()) add_unit(std::exchange(block, std::string()));
        };
        while (std::getline(lines, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty()) {
                flush_block();
            } else {
                if (!block.empty()) block += ' ';
                block += line;
            }
        }
        flush_block();
    }
    return corpus;
}

std::vector<std::string> word_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (is_word_byte(c)) {
            std::size_t j = i + 1;
            while (j < n && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
            tokens.emplace_back(text.substr(i, j - i));
            i = j;
        } else {
            tokens.emplace_back(1, text[i]);
            ++i;
        }
    }
    return tokens;
}

std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const unsigned char b0 = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        std::uint32_t cp;
        if (b0 < 0x80) {
            i += 1;
            continue;
        } else if ((b0 & 0xe0) == 0xc0) {
            len = 2;
            cp = b0 & 0x1f;
        } else if ((b0 & 0xf0) == 0xe0) {
            len = 3;
            cp = b0 & 0x0f;
        } else if ((b0 & 0xf8) == 0xf0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            return i;
        }
        if (i + len > n) return i;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char bk = static_cast<unsigned char>(bytes[i + k]);
            if ((bk & 0xc0) != 0x80) return i + k;
            cp = (cp << 6) | (bk & 0x3f);
        }
        // overlong encodings, surrogates, out-of-range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000))
            return i;
        if (cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return i;
        i += len;
    }
    return std::nullopt;
}

std::string ascii_lowercase(std::string_view word) {
    std::string out(word);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

}  // namespace currikit
