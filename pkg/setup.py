"""
Packaging for the SWDFT toolkit
Installs the `swdft` library and the `swdft` command-line entry point
"""

from pathlib import Path

from setuptools import find_packages, setup

HERE = Path(__file__).parent

# Runtime requirements only; the "Testing" block of requirements.txt is for development
RUNTIME_REQUIREMENTS = []
for line in (HERE / "requirements.txt").read_text().splitlines():
    line = line.strip()
    if line.startswith("# Testing"):
        break
    if line and not line.startswith("#"):
        RUNTIME_REQUIREMENTS.append(line)

setup(
    name="swdft",
    version="1.0.0",
    description="Sliding window DFT kernels, closed forms, local-signal estimation and simulation study",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.10",
    install_requires=RUNTIME_REQUIREMENTS,
    extras_require={"test": ["pytest>=7.4.0", "httpx>=0.25.0"]},
    entry_points={"console_scripts": ["swdft=swdft.cli:main"]},
)
