"""
Thermal Shadows Build Setup
---------------------------
Packaging for the thermal shadows numerical lab.
It will:
1. Install the ``thermal_shadows`` package
2. Pull in the numerical stack from requirements.txt
3. Register the ``thermal-shadows`` console command
"""

from pathlib import Path

from setuptools import find_packages, setup

HERE = Path(__file__).parent


def read_requirements():
    """Runtime requirements, without the test runner"""
    lines = (HERE / "requirements.txt").read_text().splitlines()
    return [line.strip() for line in lines if line.strip() and not line.startswith(("#", "pytest"))]


setup(
    name="thermal-shadows",
    version="0.1.0",
    description="Classical shadows of thermal pure quantum states: estimators, polynomial fits and resource counts",
    long_description=(HERE / "README.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("tests", "examples")),
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest>=7.4"]},
    entry_points={"console_scripts": ["thermal-shadows=thermal_shadows.cli:main"]},
)
