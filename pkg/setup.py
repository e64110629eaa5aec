#!/usr/bin/env python3
"""
Setup script for dglift
Detects the platform, installs the Python requirements and runs a smoke computation
"""
import platform
import subprocess
import sys


def detect_platform():
    """Detect the current platform and distribution."""
    system = platform.system().lower()

    if system == 'linux':
        try:
            with open('/etc/os-release', 'r') as f:
                content = f.read().lower()
                if 'amazon' in content:
                    return 'amazon_linux'
                elif 'ubuntu' in content:
                    return 'ubuntu'
                else:
                    return 'linux'
        except OSError:
            return 'linux'

    return system


def run_command(cmd, shell=False):
    """Run a command and return success status."""
    try:
        subprocess.run(cmd, check=True, shell=shell)
        return True
    except subprocess.CalledProcessError:
        return False


def install_system_packages(platform_type):
    """Make sure python3 and pip are present on Linux hosts."""
    if platform_type == 'amazon_linux':
        commands = ["sudo yum install -y python3 python3-pip"]
    elif platform_type == 'ubuntu':
        commands = ["sudo apt-get update", "sudo apt-get install -y python3-dev python3-pip"]
    else:
        return True

    print(f"🚀 Detected {platform_type} - installing system packages...")
    for cmd in commands:
        print(f"Running: {cmd}")
        if not run_command(cmd, shell=True):
            print(f"❌ Failed: {cmd}")
            return False
    return True


def install_requirements():
    """Install Python requirements."""
    print("🐍 Installing Python packages...")
    return run_command([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])


def smoke_check():
    """Lift the three-step fixture; exit code 0 means the toolchain works end to end."""
    print("🔍 Running a smoke computation...")
    return run_command([sys.executable, "app.py", "lift", "--fixture", "three_step"])


def main():
    """Main setup function."""
    print("🔍 Auto-detecting platform...")

    platform_type = detect_platform()
    print(f"📍 Detected: {platform_type}")

    success = install_system_packages(platform_type)

    if success:
        success = install_requirements()

    if success:
        success = smoke_check()

    if success:
        print("✅ Setup complete!")
        print("\nNext steps:")
        print("1. Optionally set DGLIFT_* defaults in a .env file")
        print("2. Run: python app.py check --fixture three_step")
    else:
        print("❌ Setup failed. Please check errors above.")
        sys.exit(1)


if __name__ == "__main__":
    main()
