#ifndef SHOOT_IO_HPP
#define SHOOT_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace shoot {

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Locale-independent "%.10g".
std::string format_number(double value);

/// Minimal CSV table: fixed header, rows of preformatted cells.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t row_count() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace shoot

#endif  // SHOOT_IO_HPP
